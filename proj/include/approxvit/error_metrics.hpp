#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "approxvit/adder.hpp"

namespace approxvit {

// Wide enough for squared-error sums over 2^32 samples of 33-bit errors.
__extension__ typedef unsigned __int128 Uint128;

enum class MetricMode { kExhaustive, kSampled };

struct MetricOptions {
  MetricMode mode = MetricMode::kExhaustive;
  std::uint64_t samples = 0;  // sampled mode only
  std::uint64_t seed = 0;     // sampled mode only
  unsigned jobs = 1;
};

// Largest operand-pair count exhaustive mode will enumerate (2^26).
inline constexpr unsigned kMaxExhaustiveLog2Pairs = 26;

struct ErrorReport {
  std::string name;
  unsigned width = 0;
  MetricMode mode = MetricMode::kExhaustive;
  double mae_pct = 0;  // mean |err| as % of mae_base
  double ep_pct = 0;   // % of pairs with any error
  std::uint64_t wce = 0;
  double mse = 0;
  double mre_pct = 0;  // mean |err| / max(exact, 1), in %
  std::uint64_t sample_count = 0;

  // Exact integer accumulators behind the ratios above.
  std::uint64_t mismatches = 0;
  std::uint64_t sum_abs_error = 0;
  Uint128 sum_sq_error = 0;
  std::uint64_t mae_base = 0;         // 2^(n+1) - 2, the maximum exact sum
  double mae_pct_full_range = 0;      // same mean |err| over 2^(n+1) - 1
};

ErrorReport error_metrics(const AdderModel& model, const MetricOptions& opts);

nlohmann::json to_json(const ErrorReport& report);

// Canonical serialized form written by tools (pretty JSON plus newline).
std::string to_json_text(const ErrorReport& report);

}  // namespace approxvit
