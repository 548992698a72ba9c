#include "approxvit/netlist.hpp"

#include <algorithm>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "approxvit/errors.hpp"

namespace approxvit {
namespace {

struct GateSpec {
  std::string_view name;
  GateType type;
  int arity;
};

constexpr GateSpec kGateSpecs[] = {
    {"AND", GateType::kAnd, 2},       {"OR", GateType::kOr, 2},
    {"XOR", GateType::kXor, 2},       {"NAND", GateType::kNand, 2},
    {"NOR", GateType::kNor, 2},       {"XNOR", GateType::kXnor, 2},
    {"NOT", GateType::kNot, 1},       {"BUF", GateType::kBuf, 1},
    {"CONST0", GateType::kConst0, 0}, {"CONST1", GateType::kConst1, 0},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

const std::regex& signal_pattern() {
  static const std::regex re(R"([A-Za-z_][A-Za-z0-9_.\[\]]*)");
  return re;
}

}  // namespace

GateNetlist GateNetlist::parse(std::string_view text) {
  static const std::regex gate_re(
      R"(^([^=\s]+)\s*=\s*([A-Za-z0-9_]+)\s*\(\s*([^)]*)\)\s*$)");

  GateNetlist net;
  std::unordered_map<std::string, std::uint32_t> index;
  bool have_inputs = false;
  bool have_outputs = false;
  std::size_t line_no = 0;

  auto lookup = [&](const std::string& sig) -> std::uint32_t {
    const auto it = index.find(sig);
    if (it == index.end())
      throw ParseError(line_no, "undefined signal '" + sig + "'");
    return it->second;
  };
  auto define = [&](const std::string& sig) {
    if (!std::regex_match(sig, signal_pattern()))
      throw ParseError(line_no, "invalid signal name '" + sig + "'");
    if (!index.emplace(sig, static_cast<std::uint32_t>(net.names_.size()))
             .second)
      throw ParseError(line_no, "duplicate definition of '" + sig + "'");
    net.names_.push_back(sig);
  };

  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(
        0, std::min(raw.find('#'), raw.size())));
    if (line.empty()) continue;

    if (have_outputs)
      throw ParseError(line_no, "statement after 'outputs'");

    auto words = split_words(line);
    if (words.front() == "inputs") {
      if (have_inputs) throw ParseError(line_no, "second 'inputs' line");
      const std::size_t count = words.size() - 1;
      if (count == 0 || count % 2 != 0)
        throw ParseError(line_no, "'inputs' needs an even, nonzero count");
      if (count / 2 > 32)
        throw ParseError(line_no, "operands wider than 32 bits");
      for (std::size_t i = 1; i < words.size(); ++i) define(words[i]);
      net.width_ = static_cast<unsigned>(count / 2);
      have_inputs = true;
      continue;
    }
    if (words.front() == "outputs") {
      if (!have_inputs) throw ParseError(line_no, "'outputs' before 'inputs'");
      if (words.size() - 1 != net.width_ + 1)
        throw ParseError(line_no, "expected " + std::to_string(net.width_ + 1) +
                                      " outputs, got " +
                                      std::to_string(words.size() - 1));
      for (std::size_t i = 1; i < words.size(); ++i)
        net.outputs_.push_back(lookup(words[i]));
      have_outputs = true;
      continue;
    }

    std::smatch m;
    if (!std::regex_match(line, m, gate_re))
      throw ParseError(line_no, "malformed statement '" + line + "'");
    if (!have_inputs) throw ParseError(line_no, "gate before 'inputs'");

    std::string gate_name = m[2].str();
    std::transform(gate_name.begin(), gate_name.end(), gate_name.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    const auto spec = std::find_if(
        std::begin(kGateSpecs), std::end(kGateSpecs),
        [&](const GateSpec& g) { return g.name == gate_name; });
    if (spec == std::end(kGateSpecs))
      throw ParseError(line_no, "unknown gate '" + m[2].str() + "'");

    std::vector<std::string> args;
    {
      std::string arg_text = m[3].str();
      std::istringstream args_in(arg_text);
      for (std::string a; std::getline(args_in, a, ',');) {
        a = trim(a);
        if (a.empty()) throw ParseError(line_no, "empty gate argument");
        args.push_back(a);
      }
    }
    if (static_cast<int>(args.size()) != spec->arity)
      throw ParseError(line_no, std::string(spec->name) + " takes " +
                                    std::to_string(spec->arity) +
                                    " argument(s)");

    Gate gate{spec->type};
    if (spec->arity >= 1) gate.in0 = lookup(args[0]);
    if (spec->arity >= 2) gate.in1 = lookup(args[1]);
    define(trim(m[1].str()));
    net.gates_.push_back(gate);
  }

  ++line_no;
  if (!have_inputs) throw ParseError(line_no, "missing 'inputs' line");
  if (!have_outputs) throw ParseError(line_no, "missing 'outputs' line");
  return net;
}

void GateNetlist::simulate(std::span<std::uint64_t> signals) const noexcept {
  std::size_t out = 2 * width_;
  for (const Gate& g : gates_) {
    const std::uint64_t x = signals[g.in0];
    const std::uint64_t y = signals[g.in1];
    std::uint64_t v = 0;
    switch (g.type) {
      case GateType::kAnd: v = x & y; break;
      case GateType::kOr: v = x | y; break;
      case GateType::kXor: v = x ^ y; break;
      case GateType::kNand: v = ~(x & y); break;
      case GateType::kNor: v = ~(x | y); break;
      case GateType::kXnor: v = ~(x ^ y); break;
      case GateType::kNot: v = ~x; break;
      case GateType::kBuf: v = x; break;
      case GateType::kConst0: v = 0; break;
      case GateType::kConst1: v = ~std::uint64_t{0}; break;
    }
    signals[out++] = v;
  }
}

void GateNetlist::evaluate_lanes(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b,
                                 std::span<std::uint64_t> sums) const {
  const std::size_t lanes = a.size();
  thread_local std::vector<std::uint64_t> signals;
  signals.assign(signal_count(), 0);
  for (unsigned bit = 0; bit < width_; ++bit) {
    std::uint64_t wa = 0;
    std::uint64_t wb = 0;
    for (std::size_t l = 0; l < lanes; ++l) {
      wa |= ((a[l] >> bit) & 1u) << l;
      wb |= ((b[l] >> bit) & 1u) << l;
    }
    signals[bit] = wa;
    signals[width_ + bit] = wb;
  }
  simulate(signals);
  for (std::size_t l = 0; l < lanes; ++l) {
    std::uint64_t s = 0;
    for (std::size_t o = 0; o < outputs_.size(); ++o)
      s |= ((signals[outputs_[o]] >> l) & 1u) << o;
    sums[l] = s;
  }
}

std::uint64_t GateNetlist::evaluate(std::uint64_t a, std::uint64_t b) const {
  thread_local std::vector<std::uint64_t> signals;
  signals.assign(signal_count(), 0);
  for (unsigned bit = 0; bit < width_; ++bit) {
    signals[bit] = (a >> bit) & 1u;
    signals[width_ + bit] = (b >> bit) & 1u;
  }
  simulate(signals);
  std::uint64_t s = 0;
  for (std::size_t o = 0; o < outputs_.size(); ++o)
    s |= (signals[outputs_[o]] & 1u) << o;
  return s;
}

}  // namespace approxvit
