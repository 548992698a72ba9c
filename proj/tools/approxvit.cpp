// approxvit: adder characterization, BER sweeps, POS tagging and design
// space exploration from one command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "approxvit/adder_catalog.hpp"
#include "approxvit/commsim.hpp"
#include "approxvit/dse.hpp"
#include "approxvit/error_metrics.hpp"
#include "approxvit/errors.hpp"
#include "approxvit/format.hpp"
#include "approxvit/manifest.hpp"
#include "approxvit/parallel.hpp"
#include "approxvit/pos.hpp"

namespace fs = std::filesystem;
using namespace approxvit;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned jobs = default_jobs();
  std::string out;
  std::string command;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// Resolved seed: explicit, else fresh (and announced on stderr).
std::uint64_t resolve_seed(const Globals& g, std::optional<std::uint64_t> fallback = {}) {
  if (g.seed) return *g.seed;
  if (fallback) return *fallback;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << '\n';
  return s;
}

// Every file behind an adder argument, for the manifest.
void digest_adder_sources(const std::string& arg, std::vector<InputDigest>& inputs) {
  for (const auto& item : split_list(arg)) {
    const fs::path p(item);
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".net") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) inputs.push_back({f.string(), sha256_file(f.string())});
    } else if (fs::is_regular_file(p)) {
      inputs.push_back({item, sha256_file(item)});
    }
  }
}

// Resolves each comma-separated item separately so every bad source is
// reported, not just the first.
std::vector<AdderModel> load_adders(const std::vector<std::string>& args) {
  std::vector<AdderModel> out;
  std::vector<std::string> errors;
  for (const auto& arg : args) {
    const std::vector<std::string> items =
        fs::is_directory(arg) ? std::vector<std::string>{arg} : split_list(arg);
    for (const auto& item : items) {
      try {
        for (auto& a : resolve_adders(item)) out.push_back(std::move(a));
      } catch (const Error& e) {
        errors.push_back(e.what());
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "could not load adders:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw InputError(msg);
  }
  if (out.empty()) throw UsageError("no adders given");
  return out;
}

RunManifest base_manifest(const Globals& g, std::uint64_t seed) {
  RunManifest m;
  m.command = g.command;
  m.master_seed = seed;
  m.timestamp = utc_timestamp();
  return m;
}

void emit(const std::string& path, const std::string& text, RunManifest m) {
  write_file(path, text);
  m.outputs = {path};
  write_manifest(m, path);
}

// ---- adder-metrics -------------------------------------------------------

struct MetricsArgs {
  std::vector<std::string> builtin;
  std::vector<std::string> netlist_dir;
  std::vector<std::string> netlist;
  std::string mode = "exhaustive";
  std::uint64_t samples = 1'000'000;
};

int cmd_adder_metrics(const Globals& g, const MetricsArgs& a) {
  std::vector<std::string> sources = a.builtin;
  sources.insert(sources.end(), a.netlist_dir.begin(), a.netlist_dir.end());
  sources.insert(sources.end(), a.netlist.begin(), a.netlist.end());
  if (sources.empty()) throw UsageError("give --builtin, --netlist-dir or --netlist");
  const auto adders = load_adders(sources);

  MetricOptions opts;
  opts.jobs = g.jobs;
  if (a.mode == "sampled") {
    opts.mode = MetricMode::kSampled;
    opts.samples = a.samples;
  } else if (a.mode != "exhaustive") {
    throw UsageError("--mode must be exhaustive or sampled");
  }
  opts.seed = opts.mode == MetricMode::kSampled ? resolve_seed(g) : g.seed.value_or(0);

  // Compute everything first so a capacity error leaves no partial output.
  std::vector<ErrorReport> reports;
  for (const auto& adder : adders) reports.push_back(error_metrics(adder, opts));

  RunManifest m = base_manifest(g, opts.seed);
  m.resolved_config = {{"mode", a.mode},
                       {"samples", opts.mode == MetricMode::kSampled ? opts.samples : 0},
                       {"jobs", g.jobs}};
  for (const auto& s : sources) digest_adder_sources(s, m.inputs);

  if (g.out.empty()) {
    for (const auto& r : reports) std::cout << to_json_text(r);
    return 0;
  }
  fs::create_directories(g.out);
  for (const auto& r : reports) {
    emit((fs::path(g.out) / (r.name + ".json")).string(), to_json_text(r), m);
  }
  std::cerr << reports.size() << " report(s) written to " << g.out << '\n';
  return 0;
}

// ---- ber-sweep -----------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::string adders;
  std::string corpus;
  std::string modulation;
  std::optional<unsigned> runs;
};

int cmd_ber_sweep(const Globals& g, SweepArgs a) {
  nlohmann::json cfg_json = nlohmann::json::object();
  std::vector<InputDigest> inputs;
  if (!a.config.empty()) {
    try {
      cfg_json = nlohmann::json::parse(read_file(a.config));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config '" + a.config + "': " + e.what());
    }
    inputs.push_back({a.config, sha256_file(a.config)});
    // A run manifest replays its resolved configuration.
    if (cfg_json.contains("resolved_config")) cfg_json = cfg_json.at("resolved_config");
    if (a.adders.empty() && cfg_json.contains("adders"))
      a.adders = cfg_json.at("adders").get<std::string>();
    if (a.corpus.empty() && cfg_json.contains("corpus"))
      a.corpus = cfg_json.at("corpus").get<std::string>();
  }
  if (!a.modulation.empty())
    cfg_json["modulation"] = a.modulation == "all" ? nlohmann::json("all")
                                                    : nlohmann::json(split_list(a.modulation));
  if (a.runs) cfg_json["runs_per_snr"] = *a.runs;
  std::optional<std::uint64_t> cfg_seed;
  if (cfg_json.contains("master_seed")) cfg_seed = cfg_json.at("master_seed").get<std::uint64_t>();
  cfg_json["master_seed"] = resolve_seed(g, cfg_seed);
  const PipelineConfig cfg = pipeline_config_from_json(cfg_json);

  if (a.adders.empty()) throw UsageError("--adders is required");
  if (a.corpus.empty()) throw UsageError("--corpus is required");
  const auto adders = load_adders({a.adders});
  const std::string corpus = read_file(a.corpus);
  inputs.push_back({a.corpus, sha256_file(a.corpus)});
  digest_adder_sources(a.adders, inputs);

  const std::string csv = ber_csv(ber_sweep(cfg, adders, corpus, g.jobs));
  if (g.out.empty()) {
    std::cout << csv;
    return 0;
  }
  RunManifest m = base_manifest(g, cfg.master_seed);
  m.resolved_config = to_json(cfg);
  m.resolved_config["adders"] = a.adders;
  m.resolved_config["corpus"] = a.corpus;
  m.inputs = inputs;
  emit(g.out, csv, m);
  return 0;
}

// ---- pos-tag -------------------------------------------------------------

struct PosArgs {
  std::string model;
  std::string sentences;
  std::string gold;
  std::string adders = "exact:16";
  double scale = pos::kDefaultScale;
  double clamp = pos::kDefaultClamp;
};

int cmd_pos_tag(const Globals& g, const PosArgs& a) {
  nlohmann::json model_json;
  try {
    model_json = nlohmann::json::parse(read_file(a.model));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("model '" + a.model + "': " + e.what());
  }
  const auto hmm = pos::HmmModel::from_json(model_json);
  const auto sentences = pos::parse_sentences(read_file(a.sentences));
  if (sentences.empty()) throw UsageError("sentence file '" + a.sentences + "' is empty");
  const auto gold = pos::parse_gold(read_file(a.gold), hmm.tags);
  const auto misaligned = pos::check_alignment(sentences, gold);
  if (!misaligned.empty()) {
    std::string msg = "sentences and gold tags disagree:";
    for (const auto& e : misaligned) msg += "\n  " + e;
    throw InputError(msg);
  }
  const auto adders = load_adders({a.adders});
  const auto q = pos::quantize_hmm(hmm, a.scale, a.clamp);

  std::vector<pos::TaggingScore> scores{pos::score_float_oracle(hmm, sentences, gold)};
  for (const auto& adder : adders)
    scores.push_back(pos::score_tagger(q, sentences, gold, adder));
  const std::string csv = pos::scores_csv(scores);
  if (g.out.empty()) {
    std::cout << csv;
    return 0;
  }
  RunManifest m = base_manifest(g, g.seed.value_or(0));
  nlohmann::json sentence_level = nlohmann::json::object();
  for (const auto& s : scores) sentence_level[s.adder] = s.sentence_accuracy_pct;
  m.resolved_config = {{"scale", a.scale},
                       {"clamp", a.clamp},
                       {"adders", a.adders},
                       {"tokens", scores.front().tokens},
                       {"sentence_accuracy_pct", sentence_level}};
  m.inputs = {{a.model, sha256_file(a.model)},
              {a.sentences, sha256_file(a.sentences)},
              {a.gold, sha256_file(a.gold)}};
  digest_adder_sources(a.adders, m.inputs);
  emit(g.out, csv, m);
  return 0;
}

// ---- dse -----------------------------------------------------------------

struct DseArgs {
  std::string accuracy;
  std::string costs;
  std::string metric = "ber";
  std::string baseline;
  std::string modulation;
  std::optional<double> max_ber, min_accuracy, max_area, max_power;
  bool non_strict = false;
  bool include_corrupt = false;
};

int cmd_dse(const Globals& g, const DseArgs& a) {
  const auto metric = dse::parse_metric(a.metric);
  if (!metric) throw UsageError("--metric must be ber or accuracy");
  const std::optional<std::string> mod =
      a.modulation.empty() ? std::nullopt : std::optional<std::string>(a.modulation);
  const auto acc = dse::load_accuracy(read_file(a.accuracy), *metric, mod);
  const auto costs = dse::load_costs(read_file(a.costs));
  const auto joined = dse::join_points(acc, *metric, costs);
  if (!joined.skipped.empty()) {
    std::cerr << "warning: no cost record for";
    for (const auto& s : joined.skipped) std::cerr << ' ' << s;
    std::cerr << '\n';
  }

  dse::Budget budget;
  budget.max_ber = a.max_ber;
  budget.min_accuracy_pct = a.min_accuracy;
  budget.max_area = a.max_area;
  budget.max_power = a.max_power;
  budget.strict = !a.non_strict;
  budget.exclude_corrupt = !a.include_corrupt;
  const std::vector<dse::DesignPoint> points =
      budget.empty() ? joined.points : dse::filter_budget(joined.points, budget);

  if (!a.baseline.empty()) {
    const auto savings = dse::savings_report(joined.points, a.baseline);
    std::cerr << "adder,area_saving_pct,power_saving_pct,accuracy_delta\n";
    for (const auto& p : points) {
      for (const auto& s : savings) {
        if (s.adder != p.adder) continue;
        std::cerr << s.adder << ',' << format_double(s.area_saving_pct) << ','
                  << format_double(s.power_saving_pct) << ','
                  << format_double(s.accuracy_delta) << '\n';
      }
    }
  }

  std::vector<dse::ReportRow> rows;
  if (!points.empty()) rows = dse::build_report(points, dse::pareto_front(points));
  if (!budget.empty()) std::cerr << rows.size() << " candidate(s) within budget\n";
  if (g.out.empty()) {
    std::cout << dse::report_csv(rows);
    return 0;
  }
  dse::emit_report(rows, g.out);
  RunManifest m = base_manifest(g, g.seed.value_or(0));
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  m.resolved_config = {{"metric", a.metric},
                       {"baseline", a.baseline},
                       {"modulation", a.modulation},
                       {"max_ber", opt(a.max_ber)},
                       {"min_accuracy_pct", opt(a.min_accuracy)},
                       {"max_area", opt(a.max_area)},
                       {"max_power", opt(a.max_power)},
                       {"strict", budget.strict},
                       {"exclude_corrupt", budget.exclude_corrupt}};
  m.inputs = {{a.accuracy, sha256_file(a.accuracy)}, {a.costs, sha256_file(a.costs)}};
  m.outputs = {g.out};
  write_manifest(m, g.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate-adder Viterbi decoder exploration"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  Globals g;
  for (int i = 0; i < argc; ++i) g.command += (i ? " " : "") + std::string(argv[i]);
  app.add_option("--seed", g.seed, "Master seed (generated and recorded when absent)");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (or directory for adder-metrics)");

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("adder-metrics", "Error metrics per adder");
  metrics->add_option("--builtin", ma.builtin, "exact:N, lower-or:N:K, truncated:N:K");
  metrics->add_option("--netlist-dir", ma.netlist_dir, "Directory of .net files");
  metrics->add_option("--netlist", ma.netlist, "Netlist file");
  metrics->add_option("--mode", ma.mode, "exhaustive or sampled");
  metrics->add_option("--samples", ma.samples, "Sample count in sampled mode");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("ber-sweep", "BER vs SNR sweep");
  sweep->add_option("--config", sa.config, "Pipeline config JSON or a run manifest");
  sweep->add_option("--adders", sa.adders, "Adder specs, netlists or a directory");
  sweep->add_option("--corpus", sa.corpus, "Text corpus");
  sweep->add_option("--modulation", sa.modulation, "BASK,BPSK,QPSK or all");
  sweep->add_option("--runs", sa.runs, "Runs per SNR point");

  PosArgs pa;
  auto* pos_cmd = app.add_subcommand("pos-tag", "Tagging accuracy per adder");
  pos_cmd->add_option("--model", pa.model, "HMM JSON")->required();
  pos_cmd->add_option("--sentences", pa.sentences, "One sentence per line")->required();
  pos_cmd->add_option("--gold", pa.gold, "Gold tags, same layout")->required();
  pos_cmd->add_option("--adders", pa.adders, "16-bit adder specs or netlists");
  pos_cmd->add_option("--scale", pa.scale, "Cost scale S");
  pos_cmd->add_option("--clamp", pa.clamp, "Cost clamp C");

  DseArgs da;
  auto* dse_cmd = app.add_subcommand("dse", "Pareto front and budget filtering");
  dse_cmd->add_option("--accuracy", da.accuracy, "Accuracy CSV")->required();
  dse_cmd->add_option("--costs", da.costs, "Cost CSV")->required();
  dse_cmd->add_option("--metric", da.metric, "ber or accuracy");
  dse_cmd->add_option("--baseline", da.baseline, "Adder for savings");
  dse_cmd->add_option("--modulation", da.modulation, "Restrict BER rows to one scheme");
  dse_cmd->add_option("--max-ber", da.max_ber, "Keep designs with BER below this");
  dse_cmd->add_option("--min-accuracy", da.min_accuracy, "Keep designs above this accuracy (%)");
  dse_cmd->add_option("--max-area", da.max_area, "Area ceiling (um^2)");
  dse_cmd->add_option("--max-power", da.max_power, "Power ceiling (uW)");
  dse_cmd->add_flag("--non-strict", da.non_strict, "Use <= and >= in budgets");
  dse_cmd->add_flag("--include-corrupt", da.include_corrupt,
                    "Keep corrupt designs in budget filtering");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (metrics->parsed()) return cmd_adder_metrics(g, ma);
    if (sweep->parsed()) return cmd_ber_sweep(g, sa);
    if (pos_cmd->parsed()) return cmd_pos_tag(g, pa);
    if (dse_cmd->parsed()) return cmd_dse(g, da);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
