#include "approxvit/adder_catalog.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "approxvit/errors.hpp"

namespace fs = std::filesystem;

namespace approxvit {
namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

unsigned to_unsigned(const std::string& s, std::string_view spec) {
  unsigned v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError("bad number '" + s + "' in adder spec '" +
                     std::string(spec) + "'");
  return v;
}

}  // namespace

AdderModel parse_adder_spec(std::string_view spec) {
  std::string name;
  std::string_view body = spec;
  if (const auto at = spec.find('@'); at != std::string_view::npos) {
    name = std::string(spec.substr(at + 1));
    body = spec.substr(0, at);
    if (name.empty()) throw InputError("empty name in adder spec '" + std::string(spec) + "'");
  }
  const auto parts = split(body, ':');
  const std::string& kind = parts.front();
  try {
    if (kind == "exact" && parts.size() == 2)
      return AdderModel::exact(to_unsigned(parts[1], spec), name);
    if ((kind == "lower-or" || kind == "loa") && parts.size() == 3)
      return AdderModel::parametric(AdderKind::kLowerOr, to_unsigned(parts[1], spec),
                                    to_unsigned(parts[2], spec), name);
    if ((kind == "truncated" || kind == "trunc") && parts.size() == 3)
      return AdderModel::parametric(AdderKind::kTruncated,
                                    to_unsigned(parts[1], spec),
                                    to_unsigned(parts[2], spec), name);
  } catch (const ParameterError& e) {
    throw InputError("adder spec '" + std::string(spec) + "': " + e.what());
  }
  throw InputError("unknown adder '" + std::string(spec) +
                   "' (expected exact:N, lower-or:N:K, truncated:N:K or a "
                   ".net file)");
}

std::vector<AdderModel> resolve_adders(std::string_view arg) {
  std::vector<AdderModel> out;
  const fs::path as_path{std::string(arg)};
  if (fs::is_directory(as_path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(as_path))
      if (entry.is_regular_file() && entry.path().extension() == ".net")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw InputError("no .net netlists in '" + std::string(arg) + "'");
    for (const auto& f : files) out.push_back(load_netlist_file(f.string()));
    return out;
  }
  for (const std::string& item : split(arg, ',')) {
    if (item.empty()) continue;
    if (item.size() > 4 && item.substr(item.size() - 4) == ".net")
      out.push_back(load_netlist_file(item));
    else
      out.push_back(parse_adder_spec(item));
  }
  if (out.empty()) throw InputError("no adders given");
  return out;
}

}  // namespace approxvit
