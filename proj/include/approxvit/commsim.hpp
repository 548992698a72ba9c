#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "approxvit/adder.hpp"
#include "approxvit/conv_code.hpp"
#include "approxvit/huffman.hpp"
#include "approxvit/modem.hpp"

namespace approxvit {

enum class SnrMode { kPerSample, kEbN0 };

struct PipelineConfig {
  std::vector<Modulation> modulation{std::begin(kAllModulations),
                                     std::end(kAllModulations)};
  unsigned samples_per_bit = 40;
  double bitrate = 1000.0;
  double carrier_freq = 1000.0;
  double carrier_amplitude = 1.0;
  std::vector<double> snr_db_range = default_snr_range();
  ConvCode code = ConvCode::standard_k3();
  unsigned decoder_word_width = 12;
  unsigned runs_per_snr = 12;
  std::uint64_t master_seed = 0;
  SnrMode snr_mode = SnrMode::kPerSample;
  bool channel_coding = true;

  ModemConfig modem() const {
    return {samples_per_bit, bitrate, carrier_freq, carrier_amplitude};
  }

  // -15, -14, ..., 10 dB.
  static std::vector<double> default_snr_range();
};

// Every violated constraint, in field order. Empty when valid.
std::vector<std::string> validate(const PipelineConfig& cfg);

// Missing fields keep their defaults. Throws ConfigError listing every
// problem found.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& cfg);

struct RunResult {
  std::size_t bit_errors = 0;
  std::size_t bits_compared = 0;
  double ber = 0;
  std::size_t channel_bit_errors = 0;  // demodulator output vs transmitted bits
  std::size_t channel_bits = 0;
  double symbol_match = 0;  // fraction of corpus characters recovered in place
  bool truncated = false;   // Huffman decode ended inside a codeword
};

// Source-coded corpus shared by all runs over one text.
class CommPipeline {
 public:
  CommPipeline(PipelineConfig cfg, std::string text);

  const PipelineConfig& config() const noexcept { return cfg_; }
  const HuffmanCodebook& codebook() const noexcept { return codebook_; }
  const Bits& source_bits() const noexcept { return source_bits_; }

  // Huffman -> convolutional encode (flushed) -> modulate -> AWGN ->
  // demodulate -> Viterbi (adder in the ACSU) -> Huffman decode. BER is
  // measured between the Huffman bitstream and the decoder output.
  RunResult run(Modulation m, double snr_db, const AdderModel& adder,
                std::uint64_t seed) const;

 private:
  double noise_variance(const Waveform& tx, double snr_db) const;

  PipelineConfig cfg_;
  std::string text_;
  HuffmanCodebook codebook_;
  Bits source_bits_;
};

RunResult run_pipeline(const PipelineConfig& cfg, Modulation m,
                       std::string_view text, double snr_db,
                       const AdderModel& adder, std::uint64_t seed);

// Seed of one sweep cell. The adder is deliberately not part of the key, so
// every adder sees the same channel realizations.
std::uint64_t run_seed(std::uint64_t master_seed, Modulation m,
                       std::size_t snr_index, std::size_t run_index);

struct BerRow {
  std::string adder;
  Modulation modulation = Modulation::kBpsk;
  double snr_db = 0;
  double ber = 0;         // mean over runs
  double ber_stderr = 0;  // standard error of that mean
  std::uint64_t bits_compared = 0;  // summed over runs
  unsigned runs = 0;
  double symbol_match = 0;  // mean over runs
  bool corrupt = false;     // symbol_match < 1%
};

inline constexpr double kCorruptSymbolMatch = 0.01;

// Rows ordered by adder (input order), modulation (config order), SNR.
std::vector<BerRow> ber_sweep(const PipelineConfig& cfg,
                              const std::vector<AdderModel>& adders,
                              std::string_view corpus, unsigned jobs = 1);

// CSV with header adder,modulation,snr_db,ber,bits_compared,runs,corrupt_flag.
std::string ber_csv(const std::vector<BerRow>& rows);

}  // namespace approxvit
