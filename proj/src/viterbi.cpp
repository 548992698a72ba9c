#include "approxvit/viterbi.hpp"

#include <algorithm>
#include <bit>

#include "approxvit/errors.hpp"

namespace approxvit {
namespace {

// In-place ACS over preallocated buffers; returns the normalization offset.
std::uint32_t acs_into(const PathMetrics& metrics,
                       std::span<const unsigned> branch_metrics,
                       const Trellis& trellis, const AdderModel& adder,
                       std::uint32_t saturate, PathMetrics& next,
                       std::uint8_t* decisions) {
  const std::uint32_t states = trellis.num_states();
  std::uint32_t lowest = saturate;
  for (std::uint32_t s = 0; s < states; ++s) {
    const unsigned u = trellis.input_into(s);
    const std::uint32_t p0 = trellis.predecessor(s, 0);
    const std::uint32_t p1 = trellis.predecessor(s, 1);
    const std::uint64_t c0 = std::min<std::uint64_t>(
        adder.evaluate_unchecked(metrics[p0], branch_metrics[2 * p0 + u]),
        saturate);
    const std::uint64_t c1 = std::min<std::uint64_t>(
        adder.evaluate_unchecked(metrics[p1], branch_metrics[2 * p1 + u]),
        saturate);
    const bool pick_second = c1 < c0;
    next[s] = static_cast<std::uint32_t>(pick_second ? c1 : c0);
    decisions[s] = pick_second ? 1 : 0;
    lowest = std::min(lowest, next[s]);
  }
  for (std::uint32_t s = 0; s < states; ++s) next[s] -= lowest;
  return lowest;
}

void check_word_width(const AdderModel& adder, unsigned word_width) {
  if (word_width == 0 || word_width > 32)
    throw ParameterError("decoder word width must be in [1, 32]");
  if (adder.width() < word_width)
    throw ParameterError("adder '" + adder.name() + "' is " +
                         std::to_string(adder.width()) +
                         " bits, narrower than the decoder word width " +
                         std::to_string(word_width));
}

}  // namespace

unsigned branch_metric(std::span<const std::uint8_t> expected,
                       std::span<const std::uint8_t> received) {
  if (expected.size() != received.size())
    throw InputError("symbol width mismatch: " +
                     std::to_string(expected.size()) + " vs " +
                     std::to_string(received.size()));
  unsigned d = 0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    d += (expected[i] & 1u) != (received[i] & 1u);
  return d;
}

AcsResult acs_step(const PathMetrics& metrics,
                   std::span<const unsigned> branch_metrics,
                   const Trellis& trellis, const AdderModel& adder,
                   unsigned word_width) {
  check_word_width(adder, word_width);
  const std::uint32_t states = trellis.num_states();
  if (metrics.size() != states || branch_metrics.size() != 2 * states)
    throw InputError("metric vectors do not match the trellis size");
  const std::uint32_t saturate =
      static_cast<std::uint32_t>((std::uint64_t{1} << word_width) - 1);
  for (std::uint32_t m : metrics)
    if (m > saturate) throw InputError("path metric exceeds the word width");

  AcsResult r;
  r.metrics.resize(states);
  r.decisions.resize(states);
  r.offset = acs_into(metrics, branch_metrics, trellis, adder, saturate,
                      r.metrics, r.decisions.data());
  return r;
}

DecodeTrace viterbi_decode_trace(const ConvCode& code, const Bits& received,
                                 const AdderModel& adder,
                                 const DecoderOptions& opts) {
  check_word_width(adder, opts.word_width);
  const Trellis trellis(code);
  const unsigned m = trellis.symbol_bits();
  if (received.size() % m != 0)
    throw FramingError("received length " + std::to_string(received.size()) +
                       " is not a multiple of " + std::to_string(m));

  DecodeTrace trace;
  const std::size_t steps = received.size() / m;
  const std::uint32_t states = trellis.num_states();
  const unsigned tail = code.constraint_length() - 1;
  trace.decisions.steps = steps;
  trace.decisions.states = states;
  if (steps == 0) return trace;
  if (opts.flushed && steps < tail)
    throw FramingError("flushed stream shorter than the K-1 tail");

  const std::uint32_t saturate =
      static_cast<std::uint32_t>((std::uint64_t{1} << opts.word_width) - 1);
  PathMetrics metrics(states, saturate);
  metrics[0] = 0;
  PathMetrics next(states);
  std::vector<unsigned> bms(2 * states);
  trace.decisions.bits.resize(steps * states);

  for (std::size_t t = 0; t < steps; ++t) {
    std::uint32_t rx = 0;
    for (unsigned j = 0; j < m; ++j) rx = (rx << 1) | (received[t * m + j] & 1u);
    for (std::uint32_t s = 0; s < states; ++s)
      for (unsigned u = 0; u < 2; ++u)
        bms[2 * s + u] =
            static_cast<unsigned>(std::popcount(trellis.output(s, u) ^ rx));
    acs_into(metrics, bms, trellis, adder, saturate, next,
             trace.decisions.bits.data() + t * states);
    metrics.swap(next);
  }

  std::uint32_t state = 0;
  if (!opts.flushed) {
    state = static_cast<std::uint32_t>(
        std::min_element(metrics.begin(), metrics.end()) - metrics.begin());
  }
  Bits decoded(steps);
  for (std::size_t t = steps; t-- > 0;) {
    decoded[t] = static_cast<std::uint8_t>(trellis.input_into(state));
    state = trellis.predecessor(state, trace.decisions.at(t, state));
  }
  if (opts.flushed) decoded.resize(steps - tail);
  trace.decoded = std::move(decoded);
  trace.final_metrics = std::move(metrics);
  return trace;
}

Bits viterbi_decode(const ConvCode& code, const Bits& received,
                    const AdderModel& adder, const DecoderOptions& opts) {
  return viterbi_decode_trace(code, received, adder, opts).decoded;
}

}  // namespace approxvit
