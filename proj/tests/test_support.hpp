#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef APPROXVIT_DATA_DIR
#error "APPROXVIT_DATA_DIR must be defined"
#endif

namespace testing {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(APPROXVIT_DATA_DIR) / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("approxvit_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
