#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "approxvit/netlist.hpp"

namespace approxvit {

enum class AdderKind { kExact, kLowerOr, kTruncated, kNetlist };

std::string_view to_string(AdderKind kind) noexcept;

// An n-bit unsigned adder with an (n+1)-bit result. Immutable after
// construction; copies share any underlying netlist and are safe to use
// from several threads.
class AdderModel {
 public:
  static AdderModel exact(unsigned width, std::string name = {});

  // kind must be kLowerOr or kTruncated; 0 <= approx_bits <= width.
  static AdderModel parametric(AdderKind kind, unsigned width,
                               unsigned approx_bits, std::string name = {});

  static AdderModel from_netlist(GateNetlist netlist, std::string name);

  const std::string& name() const noexcept { return name_; }
  unsigned width() const noexcept { return width_; }
  AdderKind kind() const noexcept { return kind_; }
  unsigned approx_bits() const noexcept { return approx_bits_; }
  std::uint64_t max_operand() const noexcept {
    return (std::uint64_t{1} << width_) - 1;
  }
  const GateNetlist* netlist() const noexcept { return netlist_.get(); }

  // Throws InputError when an operand does not fit in width() bits.
  std::uint64_t evaluate(std::uint64_t a, std::uint64_t b) const;

  // Caller guarantees a, b <= max_operand().
  std::uint64_t evaluate_unchecked(std::uint64_t a,
                                   std::uint64_t b) const noexcept {
    switch (kind_) {
      case AdderKind::kExact:
        return a + b;
      case AdderKind::kLowerOr: {
        if (approx_bits_ == 0) return a + b;
        const unsigned k = approx_bits_;
        const std::uint64_t low_mask = (std::uint64_t{1} << k) - 1;
        const std::uint64_t carry = (a >> (k - 1)) & (b >> (k - 1)) & 1u;
        return (((a >> k) + (b >> k) + carry) << k) | ((a | b) & low_mask);
      }
      case AdderKind::kTruncated: {
        const unsigned k = approx_bits_;
        const std::uint64_t low_mask = (std::uint64_t{1} << k) - 1;
        return (((a >> k) + (b >> k)) << k) | low_mask;
      }
      case AdderKind::kNetlist:
        return netlist_->evaluate(a, b);
    }
    return 0;
  }

 private:
  AdderModel() = default;

  std::string name_;
  unsigned width_ = 0;
  AdderKind kind_ = AdderKind::kExact;
  unsigned approx_bits_ = 0;
  std::shared_ptr<const GateNetlist> netlist_;
};

inline std::uint64_t evaluate(const AdderModel& model, std::uint64_t a,
                              std::uint64_t b) {
  return model.evaluate(a, b);
}

AdderModel make_parametric(AdderKind kind, unsigned width,
                           unsigned approx_bits);

// Parses netlist text into an adder. The width comes from the input count.
AdderModel load_netlist(std::string_view text, std::string name);

// Reads a netlist file; the model is named after the file stem.
AdderModel load_netlist_file(const std::string& path);

}  // namespace approxvit
