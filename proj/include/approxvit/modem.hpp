#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "approxvit/conv_code.hpp"

namespace approxvit {

enum class Modulation { kBask = 0, kBpsk = 1, kQpsk = 2 };

inline constexpr Modulation kAllModulations[] = {
    Modulation::kBask, Modulation::kBpsk, Modulation::kQpsk};

std::string_view to_string(Modulation m) noexcept;
std::optional<Modulation> parse_modulation(std::string_view name);

struct ModemConfig {
  unsigned samples_per_bit = 40;
  double bitrate = 1000.0;       // bits/s
  double carrier_freq = 1000.0;  // Hz
  double amplitude = 1.0;        // V
};

struct Waveform {
  std::vector<double> samples;
  double sample_rate = 0;  // Hz
  std::size_t pad_bits = 0;  // zero bits appended to complete the last symbol
};

// Samples per modulation symbol: one bit for BASK/BPSK, two for QPSK.
unsigned samples_per_symbol(Modulation m, const ModemConfig& cfg) noexcept;

// BASK: on-off keying. BPSK: antipodal. QPSK: Gray map 00->45, 01->135,
// 11->225, 10->315 degrees, one symbol per two bit periods.
Waveform modulate(Modulation m, const Bits& bits, const ModemConfig& cfg);

double mean_power(const Waveform& wave);

// Adds i.i.d. N(0, variance) noise; deterministic for a given seed.
Waveform add_noise(const Waveform& wave, double variance, std::uint64_t seed);

// Per-sample SNR: variance = mean_power(wave) / 10^(snr_db/10).
Waveform awgn(const Waveform& wave, double snr_db, std::uint64_t seed);

// Coherent correlation receiver; drops wave.pad_bits from the result.
// Throws FramingError if the sample count is not a whole number of symbols.
Bits demodulate(Modulation m, const Waveform& wave, const ModemConfig& cfg);

}  // namespace approxvit
