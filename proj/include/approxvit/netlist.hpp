#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace approxvit {

enum class GateType : std::uint8_t {
  kAnd,
  kOr,
  kXor,
  kNand,
  kNor,
  kXnor,
  kNot,
  kBuf,
  kConst0,
  kConst1,
};

// Flat, topologically ordered gate list describing an n-bit adder.
// Signals are numbered: inputs first (a0..a{n-1}, b0..b{n-1}), then one
// signal per gate in declaration order.
class GateNetlist {
 public:
  struct Gate {
    GateType type;
    std::uint32_t in0 = 0;
    std::uint32_t in1 = 0;
  };

  // Parses the line-oriented netlist grammar. Throws ParseError carrying the
  // offending line number.
  static GateNetlist parse(std::string_view text);

  unsigned width() const noexcept { return width_; }
  std::size_t gate_count() const noexcept { return gates_.size(); }
  std::size_t signal_count() const noexcept { return 2 * width_ + gates_.size(); }
  const std::vector<std::string>& signal_names() const noexcept { return names_; }

  // Bit-parallel simulation: each signal is a 64-lane mask. `signals` must
  // hold signal_count() words with the 2n input words already set.
  void simulate(std::span<std::uint64_t> signals) const noexcept;

  // Evaluates up to 64 operand pairs at once.
  void evaluate_lanes(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> sums) const;

  std::uint64_t evaluate(std::uint64_t a, std::uint64_t b) const;

 private:
  unsigned width_ = 0;
  std::vector<std::string> names_;
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> outputs_;
};

}  // namespace approxvit
