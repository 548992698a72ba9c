#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace approxvit {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct InputDigest {
  std::string path;
  std::string sha256;
};

// Reproducibility envelope written next to every output file.
struct RunManifest {
  std::string tool_version{kToolVersion};
  std::string command;
  nlohmann::json resolved_config = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
  std::string timestamp;  // UTC, ISO 8601
};

std::string sha256_hex(std::string_view data);

// Throws IoError if the file cannot be read.
std::string sha256_file(const std::string& path);

std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& m);

// Writes `<output>.manifest.json`; returns that path.
std::string write_manifest(const RunManifest& m, const std::string& output);

}  // namespace approxvit
