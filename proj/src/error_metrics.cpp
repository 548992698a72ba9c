#include "approxvit/error_metrics.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "approxvit/errors.hpp"
#include "approxvit/parallel.hpp"
#include "approxvit/rng.hpp"

namespace approxvit {
namespace {

// Fixed chunking keeps the floating-point MRE reduction order independent
// of the worker count.
constexpr std::uint64_t kChunkPairs = std::uint64_t{1} << 16;

struct Partial {
  std::uint64_t mismatches = 0;
  std::uint64_t sum_abs = 0;
  Uint128 sum_sq = 0;
  std::uint64_t wce = 0;
  double sum_rel = 0;

  void add(std::uint64_t exact, std::uint64_t approx) {
    const std::uint64_t err = approx > exact ? approx - exact : exact - approx;
    if (err == 0) return;
    ++mismatches;
    sum_abs += err;
    sum_sq += static_cast<Uint128>(err) * err;
    wce = std::max(wce, err);
    sum_rel += static_cast<double>(err) /
               static_cast<double>(std::max<std::uint64_t>(exact, 1));
  }
};

template <typename PairAt>
Partial run_chunk(const AdderModel& model, std::uint64_t begin,
                  std::uint64_t end, PairAt pair_at) {
  Partial p;
  if (model.kind() == AdderKind::kNetlist) {
    std::array<std::uint64_t, 64> a{}, b{}, s{};
    for (std::uint64_t base = begin; base < end; base += 64) {
      const std::size_t lanes =
          static_cast<std::size_t>(std::min<std::uint64_t>(64, end - base));
      for (std::size_t l = 0; l < lanes; ++l) {
        const auto [x, y] = pair_at(base + l);
        a[l] = x;
        b[l] = y;
      }
      model.netlist()->evaluate_lanes(std::span(a).first(lanes),
                                      std::span(b).first(lanes),
                                      std::span(s).first(lanes));
      for (std::size_t l = 0; l < lanes; ++l) p.add(a[l] + b[l], s[l]);
    }
    return p;
  }
  for (std::uint64_t i = begin; i < end; ++i) {
    const auto [x, y] = pair_at(i);
    p.add(x + y, model.evaluate_unchecked(x, y));
  }
  return p;
}

}  // namespace

ErrorReport error_metrics(const AdderModel& model, const MetricOptions& opts) {
  const unsigned n = model.width();
  const std::uint64_t mask = model.max_operand();

  std::uint64_t total = 0;
  if (opts.mode == MetricMode::kExhaustive) {
    if (2 * n > kMaxExhaustiveLog2Pairs)
      throw CapacityError("exhaustive metrics over 2^" + std::to_string(2 * n) +
                          " pairs exceed the 2^" +
                          std::to_string(kMaxExhaustiveLog2Pairs) +
                          " limit; use sampled mode");
    total = std::uint64_t{1} << (2 * n);
  } else {
    if (opts.samples < 1) throw InputError("sampled mode needs count >= 1");
    total = opts.samples;
  }

  const std::uint64_t chunks = (total + kChunkPairs - 1) / kChunkPairs;
  std::vector<Partial> partials(chunks);
  const std::uint64_t seed = opts.seed;
  parallel_for(chunks, opts.jobs, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunkPairs;
    const std::uint64_t end = std::min(total, begin + kChunkPairs);
    if (opts.mode == MetricMode::kExhaustive) {
      partials[c] = run_chunk(model, begin, end, [&](std::uint64_t i) {
        return std::pair{i >> n, i & mask};
      });
    } else {
      partials[c] = run_chunk(model, begin, end, [&](std::uint64_t i) {
        const std::uint64_t r = counter_draw(seed, i);
        return std::pair{r & mask, (r >> 32) & mask};
      });
    }
  });

  Partial sum;
  for (const Partial& p : partials) {
    sum.mismatches += p.mismatches;
    sum.sum_abs += p.sum_abs;
    sum.sum_sq += p.sum_sq;
    sum.wce = std::max(sum.wce, p.wce);
    sum.sum_rel += p.sum_rel;
  }

  ErrorReport r;
  r.name = model.name();
  r.width = n;
  r.mode = opts.mode;
  r.sample_count = total;
  r.mismatches = sum.mismatches;
  r.sum_abs_error = sum.sum_abs;
  r.sum_sq_error = sum.sum_sq;
  r.wce = sum.wce;
  r.mae_base = (std::uint64_t{2} << n) - 2;

  const double count = static_cast<double>(total);
  const double mean_abs = static_cast<double>(sum.sum_abs) / count;
  r.mae_pct = 100.0 * mean_abs / static_cast<double>(r.mae_base);
  r.mae_pct_full_range =
      100.0 * mean_abs / static_cast<double>((std::uint64_t{2} << n) - 1);
  r.ep_pct = 100.0 * static_cast<double>(sum.mismatches) / count;
  r.mse = static_cast<double>(sum.sum_sq) / count;
  r.mre_pct = 100.0 * sum.sum_rel / count;
  return r;
}

nlohmann::json to_json(const ErrorReport& r) {
  return nlohmann::json{
      {"name", r.name},
      {"width", r.width},
      {"mode", r.mode == MetricMode::kExhaustive ? "exhaustive" : "sampled"},
      {"mae_pct", r.mae_pct},
      {"ep_pct", r.ep_pct},
      {"wce", r.wce},
      {"mse", r.mse},
      {"mre_pct", r.mre_pct},
      {"sample_count", r.sample_count},
      {"mae_base", r.mae_base},
      {"mae_pct_full_range", r.mae_pct_full_range},
  };
}

std::string to_json_text(const ErrorReport& report) {
  return to_json(report).dump(2) + "\n";
}

}  // namespace approxvit
