#include "approxvit/adder.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "approxvit/errors.hpp"

namespace approxvit {

std::string_view to_string(AdderKind kind) noexcept {
  switch (kind) {
    case AdderKind::kExact: return "exact";
    case AdderKind::kLowerOr: return "lower-or";
    case AdderKind::kTruncated: return "truncated";
    case AdderKind::kNetlist: return "netlist";
  }
  return "unknown";
}

namespace {

void check_width(unsigned width) {
  if (width == 0 || width > 32)
    throw ParameterError("adder width must be in [1, 32], got " +
                         std::to_string(width));
}

}  // namespace

AdderModel AdderModel::exact(unsigned width, std::string name) {
  check_width(width);
  AdderModel m;
  m.width_ = width;
  m.kind_ = AdderKind::kExact;
  m.name_ = name.empty() ? "exact_" + std::to_string(width) : std::move(name);
  return m;
}

AdderModel AdderModel::parametric(AdderKind kind, unsigned width,
                                  unsigned approx_bits, std::string name) {
  check_width(width);
  if (kind != AdderKind::kLowerOr && kind != AdderKind::kTruncated)
    throw ParameterError("parametric adders are lower-or or truncated");
  if (approx_bits > width)
    throw ParameterError("approximated bit count k=" +
                         std::to_string(approx_bits) + " exceeds width n=" +
                         std::to_string(width));
  AdderModel m;
  m.width_ = width;
  m.kind_ = kind;
  m.approx_bits_ = approx_bits;
  if (name.empty()) {
    name = (kind == AdderKind::kLowerOr ? "loa_" : "trunc_") +
           std::to_string(width) + "_" + std::to_string(approx_bits);
  }
  m.name_ = std::move(name);
  return m;
}

AdderModel AdderModel::from_netlist(GateNetlist netlist, std::string name) {
  AdderModel m;
  m.width_ = netlist.width();
  m.kind_ = AdderKind::kNetlist;
  m.name_ = std::move(name);
  m.netlist_ = std::make_shared<const GateNetlist>(std::move(netlist));
  return m;
}

std::uint64_t AdderModel::evaluate(std::uint64_t a, std::uint64_t b) const {
  if (a > max_operand() || b > max_operand())
    throw InputError("operand out of range for " + std::to_string(width_) +
                     "-bit adder '" + name_ + "'");
  return evaluate_unchecked(a, b);
}

AdderModel make_parametric(AdderKind kind, unsigned width,
                           unsigned approx_bits) {
  return AdderModel::parametric(kind, width, approx_bits);
}

AdderModel load_netlist(std::string_view text, std::string name) {
  return AdderModel::from_netlist(GateNetlist::parse(text), std::move(name));
}

AdderModel load_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read netlist '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return load_netlist(text.str(), std::filesystem::path(path).stem().string());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.message());
  }
}

}  // namespace approxvit
