#include "approxvit/modem.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "approxvit/errors.hpp"

namespace approxvit {

std::string_view to_string(Modulation m) noexcept {
  switch (m) {
    case Modulation::kBask: return "BASK";
    case Modulation::kBpsk: return "BPSK";
    case Modulation::kQpsk: return "QPSK";
  }
  return "?";
}

std::optional<Modulation> parse_modulation(std::string_view name) {
  for (Modulation m : kAllModulations)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

unsigned samples_per_symbol(Modulation m, const ModemConfig& cfg) noexcept {
  return m == Modulation::kQpsk ? 2 * cfg.samples_per_bit : cfg.samples_per_bit;
}

namespace {

double phase_step(const ModemConfig& cfg) {
  const double fs = cfg.bitrate * cfg.samples_per_bit;
  return 2.0 * std::numbers::pi * cfg.carrier_freq / fs;
}

void check_config(const ModemConfig& cfg) {
  if (cfg.samples_per_bit < 2)
    throw ConfigError("samples_per_bit must be >= 2");
  if (!(cfg.bitrate > 0) || !(cfg.carrier_freq >= 0) ||
      !std::isfinite(cfg.amplitude))
    throw ConfigError("invalid modem parameters");
}

}  // namespace

Waveform modulate(Modulation m, const Bits& bits, const ModemConfig& cfg) {
  check_config(cfg);
  Waveform w;
  w.sample_rate = cfg.bitrate * cfg.samples_per_bit;
  const double step = phase_step(cfg);
  const double a = cfg.amplitude;

  if (m == Modulation::kQpsk) {
    Bits padded = bits;
    if (padded.size() % 2 != 0) {
      padded.push_back(0);
      w.pad_bits = 1;
    }
    const unsigned sps = samples_per_symbol(m, cfg);
    w.samples.reserve(padded.size() / 2 * sps);
    for (std::size_t i = 0; i < padded.size(); i += 2) {
      const unsigned pair = (padded[i] & 1u) << 1 | (padded[i + 1] & 1u);
      // Gray order around the circle: 00, 01, 11, 10.
      static constexpr int kQuadrant[4] = {0, 1, 3, 2};
      const double phi =
          std::numbers::pi / 4 + kQuadrant[pair] * std::numbers::pi / 2;
      for (unsigned j = 0; j < sps; ++j) {
        const double n = static_cast<double>(w.samples.size());
        w.samples.push_back(a * std::cos(step * n + phi));
      }
    }
    return w;
  }

  w.samples.reserve(bits.size() * cfg.samples_per_bit);
  for (std::uint8_t b : bits) {
    for (unsigned j = 0; j < cfg.samples_per_bit; ++j) {
      const double n = static_cast<double>(w.samples.size());
      const double carrier = a * std::cos(step * n);
      double v = 0;
      if (m == Modulation::kBpsk)
        v = (b & 1u) ? carrier : -carrier;
      else
        v = (b & 1u) ? carrier : 0.0;
      w.samples.push_back(v);
    }
  }
  return w;
}

double mean_power(const Waveform& wave) {
  if (wave.samples.empty()) return 0;
  double sum = 0;
  for (double s : wave.samples) sum += s * s;
  return sum / static_cast<double>(wave.samples.size());
}

Waveform add_noise(const Waveform& wave, double variance, std::uint64_t seed) {
  if (wave.samples.empty()) throw InputError("cannot add noise to an empty waveform");
  if (!(variance >= 0) || !std::isfinite(variance))
    throw InputError("noise variance must be finite and >= 0");
  Waveform out = wave;
  if (variance == 0) return out;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  for (double& s : out.samples) s += noise(gen);
  return out;
}

Waveform awgn(const Waveform& wave, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw InputError("SNR must be finite");
  return add_noise(wave, mean_power(wave) / std::pow(10.0, snr_db / 10.0),
                   seed);
}

Bits demodulate(Modulation m, const Waveform& wave, const ModemConfig& cfg) {
  check_config(cfg);
  const unsigned sps = samples_per_symbol(m, cfg);
  if (wave.samples.size() % sps != 0)
    throw FramingError("waveform of " + std::to_string(wave.samples.size()) +
                       " samples is not a whole number of " +
                       std::to_string(sps) + "-sample symbols");
  const double step = phase_step(cfg);
  const std::size_t symbols = wave.samples.size() / sps;
  Bits bits;
  bits.reserve(symbols * (m == Modulation::kQpsk ? 2 : 1));

  for (std::size_t k = 0; k < symbols; ++k) {
    // Correlations against the in-phase (cos) and quadrature (sin) carriers
    // plus the Gram terms of the two references over this interval.
    double rc = 0, rs = 0, cc = 0, ss = 0, cs = 0;
    for (unsigned j = 0; j < sps; ++j) {
      const std::size_t n = k * sps + j;
      const double c = std::cos(step * static_cast<double>(n));
      const double s = std::sin(step * static_cast<double>(n));
      const double r = wave.samples[n];
      rc += r * c;
      rs += r * s;
      cc += c * c;
      ss += s * s;
      cs += c * s;
    }
    switch (m) {
      case Modulation::kBpsk:
        bits.push_back(rc > 0 ? 1 : 0);
        break;
      case Modulation::kBask:
        bits.push_back(rc > 0.5 * cfg.amplitude * cc ? 1 : 0);
        break;
      case Modulation::kQpsk: {
        // Least-squares fit r = x*cos + y*sin; then x = A cos(phi),
        // y = -A sin(phi).
        const double det = cc * ss - cs * cs;
        double x = rc, y = rs;
        if (std::abs(det) > 1e-12) {
          x = (ss * rc - cs * rs) / det;
          y = (cc * rs - cs * rc) / det;
        }
        bits.push_back(y > 0 ? 1 : 0);  // sin(phi) < 0
        bits.push_back(x < 0 ? 1 : 0);  // cos(phi) < 0
        break;
      }
    }
  }
  if (wave.pad_bits > 0 && bits.size() >= wave.pad_bits)
    bits.resize(bits.size() - wave.pad_bits);
  return bits;
}

}  // namespace approxvit
