#include "approxvit/conv_code.hpp"

#include <bit>

#include "approxvit/errors.hpp"

namespace approxvit {

ConvCode::ConvCode(unsigned constraint_length,
                   std::vector<std::uint32_t> generators)
    : k_(constraint_length), gens_(std::move(generators)) {
  if (k_ < 2 || k_ > 16)
    throw ParameterError("constraint length must be in [2, 16]");
  if (gens_.empty()) throw ParameterError("at least one generator required");
  for (std::uint32_t g : gens_) {
    if (g == 0 || g >= (1u << k_))
      throw ParameterError("generator " + std::to_string(g) +
                           " must be a nonzero " + std::to_string(k_) +
                           "-bit polynomial");
  }
}

ConvCode ConvCode::from_octal(unsigned constraint_length,
                              const std::vector<std::string>& generators_octal) {
  std::vector<std::uint32_t> gens;
  for (const std::string& s : generators_octal) {
    if (s.empty()) throw ParameterError("empty octal generator");
    std::uint32_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '7')
        throw ParameterError("generator '" + s + "' is not octal");
      v = v * 8 + static_cast<std::uint32_t>(c - '0');
      if (v > 0xFFFFu) throw ParameterError("generator '" + s + "' too large");
    }
    gens.push_back(v);
  }
  return ConvCode(constraint_length, std::move(gens));
}

ConvCode ConvCode::standard_k3() { return ConvCode(3, {07, 05}); }

std::vector<std::string> ConvCode::generators_octal() const {
  std::vector<std::string> out;
  for (std::uint32_t g : gens_) {
    std::string s;
    do {
      s.insert(s.begin(), static_cast<char>('0' + (g & 7u)));
      g >>= 3;
    } while (g != 0);
    out.push_back(s);
  }
  return out;
}

Trellis::Trellis(const ConvCode& code)
    : num_states_(code.num_states()),
      symbol_bits_(code.symbol_bits()),
      memory_(code.constraint_length() - 1),
      next_(2 * num_states_),
      out_(2 * num_states_) {
  for (std::uint32_t s = 0; s < num_states_; ++s) {
    for (unsigned u = 0; u < 2; ++u) {
      const std::uint32_t reg = (u << memory_) | s;
      std::uint32_t sym = 0;
      for (std::uint32_t g : code.generators())
        sym = (sym << 1) | (std::popcount(reg & g) & 1u);
      next_[2 * s + u] = (u << (memory_ - 1)) | (s >> 1);
      out_[2 * s + u] = sym;
    }
  }
}

Bits conv_encode(const ConvCode& code, const Bits& bits, bool flush) {
  const Trellis trellis(code);
  const unsigned m = trellis.symbol_bits();
  const std::size_t steps =
      bits.size() + (flush ? code.constraint_length() - 1 : 0);
  Bits out;
  out.reserve(steps * m);
  std::uint32_t state = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    const unsigned u = t < bits.size() ? (bits[t] & 1u) : 0u;
    const std::uint32_t sym = trellis.output(state, u);
    for (unsigned j = m; j-- > 0;) out.push_back((sym >> j) & 1u);
    state = trellis.next_state(state, u);
  }
  return out;
}

}  // namespace approxvit
