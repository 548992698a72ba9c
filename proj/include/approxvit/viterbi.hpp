#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "approxvit/adder.hpp"
#include "approxvit/conv_code.hpp"

namespace approxvit {

// One metric per trellis state, each below 2^word_width.
using PathMetrics = std::vector<std::uint32_t>;

// Survivor memory: one decision bit per (step, state), row-major by step.
struct DecisionMatrix {
  std::size_t steps = 0;
  std::uint32_t states = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(std::size_t step, std::uint32_t state) const {
    return bits[step * states + state];
  }
};

// Hamming distance between two equal-width hard-decision symbols.
unsigned branch_metric(std::span<const std::uint8_t> expected,
                       std::span<const std::uint8_t> received);

struct AcsResult {
  PathMetrics metrics;                  // normalized: min is 0
  std::vector<std::uint8_t> decisions;  // surviving predecessor index per state
  std::uint32_t offset = 0;             // amount subtracted during normalization
};

// One add-compare-select iteration. `branch_metrics[2*s + u]` is the metric of
// the transition leaving state s on input u. Both additions per state go
// through `adder` and saturate at 2^word_width - 1; compare, select and the
// subtract-min normalization are exact. Ties keep predecessor 0.
AcsResult acs_step(const PathMetrics& metrics,
                   std::span<const unsigned> branch_metrics,
                   const Trellis& trellis, const AdderModel& adder,
                   unsigned word_width);

struct DecoderOptions {
  unsigned word_width = 12;
  // Stream was terminated with K-1 zero bits: trace back from state 0 and
  // drop the flush bits from the output.
  bool flushed = true;
};

struct DecodeTrace {
  Bits decoded;
  DecisionMatrix decisions;
  PathMetrics final_metrics;
};

// Block Viterbi decoding with full traceback. Throws FramingError when the
// received length is not a multiple of the symbol width.
DecodeTrace viterbi_decode_trace(const ConvCode& code, const Bits& received,
                                 const AdderModel& adder,
                                 const DecoderOptions& opts = {});

Bits viterbi_decode(const ConvCode& code, const Bits& received,
                    const AdderModel& adder, const DecoderOptions& opts = {});

}  // namespace approxvit
