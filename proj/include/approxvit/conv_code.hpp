#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace approxvit {

using Bits = std::vector<std::uint8_t>;

// Feed-forward rate 1/m convolutional code. Generator bit K-1 taps the
// current input bit, bit 0 the oldest register bit (usual octal notation:
// (7,5) is 1+D+D^2, 1+D^2).
class ConvCode {
 public:
  ConvCode(unsigned constraint_length, std::vector<std::uint32_t> generators);

  // Generators given as octal digit strings, e.g. {"7", "5"} or {"171", "133"}.
  static ConvCode from_octal(unsigned constraint_length,
                             const std::vector<std::string>& generators_octal);

  // K=3, (7,5) octal.
  static ConvCode standard_k3();

  unsigned constraint_length() const noexcept { return k_; }
  const std::vector<std::uint32_t>& generators() const noexcept { return gens_; }
  unsigned symbol_bits() const noexcept {
    return static_cast<unsigned>(gens_.size());
  }
  std::uint32_t num_states() const noexcept { return 1u << (k_ - 1); }
  std::vector<std::string> generators_octal() const;

 private:
  unsigned k_;
  std::vector<std::uint32_t> gens_;
};

// Expanded state-transition table. State = last K-1 inputs, newest in the
// most significant bit.
class Trellis {
 public:
  explicit Trellis(const ConvCode& code);

  std::uint32_t num_states() const noexcept { return num_states_; }
  unsigned symbol_bits() const noexcept { return symbol_bits_; }
  unsigned memory() const noexcept { return memory_; }

  std::uint32_t next_state(std::uint32_t state, unsigned input) const noexcept {
    return next_[2 * state + input];
  }
  // Expected output symbol, first generator in the most significant bit.
  std::uint32_t output(std::uint32_t state, unsigned input) const noexcept {
    return out_[2 * state + input];
  }
  // The two states leading into `state`; index 0 is the smaller one.
  std::uint32_t predecessor(std::uint32_t state, unsigned which) const noexcept {
    return ((state << 1) & (num_states_ - 1)) | which;
  }
  // Input bit carried by every transition into `state`.
  unsigned input_into(std::uint32_t state) const noexcept {
    return memory_ == 0 ? 0 : state >> (memory_ - 1);
  }

 private:
  std::uint32_t num_states_;
  unsigned symbol_bits_;
  unsigned memory_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> out_;
};

// Output length = symbol_bits * (bits.size() + (flush ? K-1 : 0)).
Bits conv_encode(const ConvCode& code, const Bits& bits, bool flush);

}  // namespace approxvit
