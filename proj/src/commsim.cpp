#include "approxvit/commsim.hpp"

#include <cmath>
#include <sstream>

#include "approxvit/errors.hpp"
#include "approxvit/format.hpp"
#include "approxvit/parallel.hpp"
#include "approxvit/rng.hpp"
#include "approxvit/viterbi.hpp"

namespace approxvit {

std::vector<double> PipelineConfig::default_snr_range() {
  std::vector<double> r;
  for (int db = -15; db <= 10; ++db) r.push_back(db);
  return r;
}

std::vector<std::string> validate(const PipelineConfig& cfg) {
  std::vector<std::string> errs;
  if (cfg.modulation.empty()) errs.push_back("modulation: at least one scheme");
  if (cfg.samples_per_bit < 2) errs.push_back("samples_per_bit: must be >= 2");
  if (!(cfg.bitrate > 0) || !std::isfinite(cfg.bitrate))
    errs.push_back("bitrate: must be > 0");
  if (!(cfg.carrier_freq >= 0) || !std::isfinite(cfg.carrier_freq))
    errs.push_back("carrier_freq: must be >= 0");
  if (!std::isfinite(cfg.carrier_amplitude) || cfg.carrier_amplitude <= 0)
    errs.push_back("carrier_amplitude: must be > 0");
  if (cfg.snr_db_range.empty())
    errs.push_back("snr_db_range: at least one SNR point");
  for (double s : cfg.snr_db_range)
    if (!std::isfinite(s)) errs.push_back("snr_db_range: values must be finite");
  if (cfg.decoder_word_width < 2 || cfg.decoder_word_width > 32)
    errs.push_back("decoder_word_width: must be in [2, 32]");
  if (cfg.runs_per_snr < 1) errs.push_back("runs_per_snr: must be >= 1");
  return errs;
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out,
                std::vector<std::string>& errs) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    errs.push_back(std::string(key) + ": wrong type");
  }
}

std::string octal_text(const nlohmann::json& g) {
  // Integers are read digit-for-digit as octal (171 means 0171).
  if (g.is_string()) return g.get<std::string>();
  if (g.is_number_unsigned() || g.is_number_integer())
    return std::to_string(g.get<long long>());
  throw ConfigError("generator must be a string or integer");
}

}  // namespace

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  PipelineConfig cfg;
  std::vector<std::string> errs;
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");

  if (j.contains("modulation")) {
    const auto& m = j.at("modulation");
    std::vector<std::string> names;
    if (m.is_string()) {
      names.push_back(m.get<std::string>());
    } else if (m.is_array()) {
      for (const auto& e : m)
        names.push_back(e.is_string() ? e.get<std::string>() : "?");
    } else {
      errs.push_back("modulation: expected a string or list");
    }
    if (!names.empty()) cfg.modulation.clear();
    for (const auto& n : names) {
      if (n == "all") {
        cfg.modulation.assign(std::begin(kAllModulations),
                              std::end(kAllModulations));
      } else if (auto mod = parse_modulation(n)) {
        cfg.modulation.push_back(*mod);
      } else {
        errs.push_back("modulation: unknown scheme '" + n + "'");
      }
    }
  }
  read_field(j, "samples_per_bit", cfg.samples_per_bit, errs);
  read_field(j, "bitrate", cfg.bitrate, errs);
  read_field(j, "carrier_freq", cfg.carrier_freq, errs);
  read_field(j, "carrier_amplitude", cfg.carrier_amplitude, errs);
  if (j.contains("snr_db_range")) {
    const auto& r = j.at("snr_db_range");
    if (r.is_array()) {
      read_field(j, "snr_db_range", cfg.snr_db_range, errs);
    } else if (r.is_object() && r.contains("start") && r.contains("stop") &&
               r.at("start").is_number() && r.at("stop").is_number() &&
               (!r.contains("step") || r.at("step").is_number())) {
      const double start = r.at("start").get<double>();
      const double stop = r.at("stop").get<double>();
      const double step = r.value("step", 1.0);
      cfg.snr_db_range.clear();
      if (!(step > 0)) {
        errs.push_back("snr_db_range: step must be > 0");
      } else {
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= count; ++i) cfg.snr_db_range.push_back(start + i * step);
      }
    } else {
      errs.push_back("snr_db_range: expected a list or {start, stop, step}");
    }
  }
  if (j.contains("code")) {
    const auto& c = j.at("code");
    try {
      const unsigned k = c.at("constraint_length").get<unsigned>();
      std::vector<std::string> gens;
      for (const auto& g : c.at("generators_octal")) gens.push_back(octal_text(g));
      cfg.code = ConvCode::from_octal(k, gens);
    } catch (const nlohmann::json::exception&) {
      errs.push_back("code: needs constraint_length and generators_octal");
    } catch (const Error& e) {
      errs.push_back(std::string("code: ") + e.what());
    }
  }
  read_field(j, "decoder_word_width", cfg.decoder_word_width, errs);
  read_field(j, "runs_per_snr", cfg.runs_per_snr, errs);
  read_field(j, "master_seed", cfg.master_seed, errs);
  if (j.contains("snr_mode")) {
    const std::string mode = j.at("snr_mode").is_string()
                                 ? j.at("snr_mode").get<std::string>()
                                 : "";
    if (mode == "per_sample")
      cfg.snr_mode = SnrMode::kPerSample;
    else if (mode == "ebn0")
      cfg.snr_mode = SnrMode::kEbN0;
    else
      errs.push_back("snr_mode: expected 'per_sample' or 'ebn0'");
  }
  read_field(j, "channel_coding", cfg.channel_coding, errs);

  for (auto& e : validate(cfg)) errs.push_back(std::move(e));
  if (!errs.empty()) {
    std::string msg = "invalid pipeline config:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

nlohmann::json to_json(const PipelineConfig& cfg) {
  nlohmann::json mods = nlohmann::json::array();
  for (Modulation m : cfg.modulation) mods.push_back(std::string(to_string(m)));
  return nlohmann::json{
      {"modulation", mods},
      {"samples_per_bit", cfg.samples_per_bit},
      {"bitrate", cfg.bitrate},
      {"carrier_freq", cfg.carrier_freq},
      {"carrier_amplitude", cfg.carrier_amplitude},
      {"snr_db_range", cfg.snr_db_range},
      {"code",
       {{"constraint_length", cfg.code.constraint_length()},
        {"generators_octal", cfg.code.generators_octal()}}},
      {"decoder_word_width", cfg.decoder_word_width},
      {"runs_per_snr", cfg.runs_per_snr},
      {"master_seed", cfg.master_seed},
      {"snr_mode", cfg.snr_mode == SnrMode::kPerSample ? "per_sample" : "ebn0"},
      {"channel_coding", cfg.channel_coding},
  };
}

CommPipeline::CommPipeline(PipelineConfig cfg, std::string text)
    : cfg_(std::move(cfg)),
      text_(std::move(text)),
      codebook_(text_.empty() ? throw InputError("corpus text is empty")
                              : HuffmanCodebook::build(
                                    HuffmanCodebook::frequencies(text_))),
      source_bits_(codebook_.encode(text_)) {
  const auto errs = validate(cfg_);
  if (!errs.empty()) throw ConfigError("invalid pipeline config: " + errs.front());
}

double CommPipeline::noise_variance(const Waveform& tx, double snr_db) const {
  const double power = mean_power(tx);
  const double ratio = std::pow(10.0, snr_db / 10.0);
  if (cfg_.snr_mode == SnrMode::kPerSample) return power / ratio;
  // Eb/N0: energy per source bit over a two-sided noise density sigma^2.
  const double coded_per_source = cfg_.channel_coding ? cfg_.code.symbol_bits() : 1;
  const double eb = power * cfg_.samples_per_bit * coded_per_source;
  return eb / (2.0 * ratio);
}

RunResult CommPipeline::run(Modulation m, double snr_db,
                            const AdderModel& adder, std::uint64_t seed) const {
  const ModemConfig modem = cfg_.modem();
  const Bits tx_bits = cfg_.channel_coding
                           ? conv_encode(cfg_.code, source_bits_, true)
                           : source_bits_;
  const Waveform tx = modulate(m, tx_bits, modem);
  const Waveform rx = add_noise(tx, noise_variance(tx, snr_db), seed);
  const Bits demod = demodulate(m, rx, modem);

  RunResult r;
  r.channel_bits = tx_bits.size();
  for (std::size_t i = 0; i < tx_bits.size(); ++i)
    r.channel_bit_errors += tx_bits[i] != demod[i];

  const Bits decoded =
      cfg_.channel_coding
          ? viterbi_decode(cfg_.code, demod, adder,
                           {cfg_.decoder_word_width, true})
          : demod;

  r.bits_compared = source_bits_.size();
  for (std::size_t i = 0; i < source_bits_.size(); ++i)
    r.bit_errors += source_bits_[i] != decoded[i];
  r.ber = r.bits_compared == 0
              ? 0.0
              : static_cast<double>(r.bit_errors) /
                    static_cast<double>(r.bits_compared);

  const auto text = codebook_.decode(decoded);
  r.truncated = text.truncated || text.invalid;
  std::size_t match = 0;
  for (std::size_t i = 0; i < std::min(text.text.size(), text_.size()); ++i)
    match += text.text[i] == text_[i];
  r.symbol_match = static_cast<double>(match) / static_cast<double>(text_.size());
  return r;
}

RunResult run_pipeline(const PipelineConfig& cfg, Modulation m,
                       std::string_view text, double snr_db,
                       const AdderModel& adder, std::uint64_t seed) {
  return CommPipeline(cfg, std::string(text)).run(m, snr_db, adder, seed);
}

std::uint64_t run_seed(std::uint64_t master_seed, Modulation m,
                       std::size_t snr_index, std::size_t run_index) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(m), snr_index,
                      run_index});
}

std::vector<BerRow> ber_sweep(const PipelineConfig& cfg,
                              const std::vector<AdderModel>& adders,
                              std::string_view corpus, unsigned jobs) {
  const CommPipeline pipeline(cfg, std::string(corpus));
  const std::size_t n_mod = cfg.modulation.size();
  const std::size_t n_snr = cfg.snr_db_range.size();
  const std::size_t n_run = cfg.runs_per_snr;
  const std::size_t cells = adders.size() * n_mod * n_snr;

  std::vector<RunResult> runs(cells * n_run);
  parallel_for(runs.size(), jobs, [&](std::size_t task) {
    const std::size_t run = task % n_run;
    const std::size_t cell = task / n_run;
    const std::size_t snr = cell % n_snr;
    const std::size_t mod = (cell / n_snr) % n_mod;
    const std::size_t adder = cell / (n_snr * n_mod);
    const Modulation m = cfg.modulation[mod];
    runs[task] = pipeline.run(m, cfg.snr_db_range[snr], adders[adder],
                              run_seed(cfg.master_seed, m, snr, run));
  });

  std::vector<BerRow> rows;
  rows.reserve(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    BerRow row;
    row.adder = adders[cell / (n_snr * n_mod)].name();
    row.modulation = cfg.modulation[(cell / n_snr) % n_mod];
    row.snr_db = cfg.snr_db_range[cell % n_snr];
    row.runs = static_cast<unsigned>(n_run);
    double sum = 0, sum_sq = 0, match = 0;
    for (std::size_t r = 0; r < n_run; ++r) {
      const RunResult& rr = runs[cell * n_run + r];
      sum += rr.ber;
      sum_sq += rr.ber * rr.ber;
      match += rr.symbol_match;
      row.bits_compared += rr.bits_compared;
    }
    const double n = static_cast<double>(n_run);
    row.ber = sum / n;
    row.symbol_match = match / n;
    if (n_run > 1) {
      const double var = std::max(0.0, (sum_sq - n * row.ber * row.ber) / (n - 1));
      row.ber_stderr = std::sqrt(var / n);
    }
    row.corrupt = row.symbol_match < kCorruptSymbolMatch;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ber_csv(const std::vector<BerRow>& rows) {
  std::ostringstream out;
  out << "adder,modulation,snr_db,ber,bits_compared,runs,corrupt_flag\n";
  for (const BerRow& r : rows) {
    out << r.adder << ',' << to_string(r.modulation) << ','
        << format_double(r.snr_db) << ',' << format_double(r.ber) << ','
        << r.bits_compared << ',' << r.runs << ',' << (r.corrupt ? 1 : 0)
        << '\n';
  }
  return out.str();
}

}  // namespace approxvit
