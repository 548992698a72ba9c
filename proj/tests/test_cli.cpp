#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "approxvit/adder_catalog.hpp"
#include "approxvit/commsim.hpp"
#include "approxvit/dse.hpp"
#include "approxvit/error_metrics.hpp"
#include "approxvit/pos.hpp"
#include "test_support.hpp"

#ifndef APPROXVIT_CLI
#error "APPROXVIT_CLI must point at the approxvit executable"
#endif

using namespace approxvit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(const fs::path& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(APPROXVIT_CLI) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testing::slurp(out);
  r.err = testing::slurp(err);
  return r;
}

std::string data(const std::string& rel) { return testing::data_path(rel).string(); }

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const char* const kCorpus = "a small corpus for the sweep, repeated: abc abc abc.";

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(testing::slurp(p)); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("adder-metrics on a built-in exact adder") {
  const auto dir = testing::scratch_dir("cli_metrics_exact");
  const auto r = run(dir, "--seed 1 --out " + (dir / "rep").string() +
                              " adder-metrics --builtin exact:12");
  REQUIRE(r.code == 0);
  const auto j = read_json(dir / "rep" / "exact_12.json");
  CHECK(j.at("mae_pct") == 0);
  CHECK(j.at("ep_pct") == 0);
  CHECK(j.at("wce") == 0);
  CHECK(fs::exists(dir / "rep" / "exact_12.json.manifest.json"));
}

TEST_CASE("adder-metrics over a netlist directory") {
  const auto dir = testing::scratch_dir("cli_metrics_dir");
  fs::create_directories(dir / "nets");
  for (const char* f : {"half_adder.net", "rca4.net", "loa4_2.net"})
    fs::copy_file(testing::data_path(std::string("netlists/") + f), dir / "nets" / f);
  const auto r = run(dir, "--out " + (dir / "rep").string() +
                              " adder-metrics --mode exhaustive --netlist-dir " +
                              (dir / "nets").string());
  REQUIRE(r.code == 0);
  std::size_t reports = 0;
  for (const auto& e : fs::directory_iterator(dir / "rep"))
    reports += e.path().string().ends_with(".json") &&
               !e.path().string().ends_with(".manifest.json");
  CHECK(reports == 3);
  const auto m = read_json(dir / "rep" / "rca4.json.manifest.json");
  CHECK(m.at("inputs").size() == 3);
  CHECK(m.at("tool_version") == "0.1.0");
}

TEST_CASE("adder-metrics output equals the library call byte for byte") {
  const auto dir = testing::scratch_dir("cli_metrics_lib");
  const auto r = run(dir, "--jobs 3 --out " + (dir / "rep").string() +
                              " adder-metrics --builtin lower-or:12:6");
  REQUIRE(r.code == 0);
  const auto lib = to_json_text(
      error_metrics(make_parametric(AdderKind::kLowerOr, 12, 6), {MetricMode::kExhaustive, 0, 0, 1}));
  CHECK(testing::slurp(dir / "rep" / "loa_12_6.json") == lib);
}

TEST_CASE("adder-metrics failures exit nonzero") {
  const auto dir = testing::scratch_dir("cli_metrics_bad");
  testing::spit(dir / "bad.net", "inputs a0 b0\ns0 = XOR(a0, zz)\n");
  CHECK(run(dir, "adder-metrics --builtin fancy:8").code != 0);
  const auto r = run(dir, "adder-metrics --builtin exact:4 --netlist " + (dir / "bad.net").string());
  CHECK(r.code != 0);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run(dir, "adder-metrics").code == 2);
}

TEST_CASE("ber-sweep with the default config covers 26 SNR points") {
  const auto dir = testing::scratch_dir("cli_sweep_default");
  testing::spit(dir / "corpus.txt", kCorpus);
  const auto out = (dir / "ber.csv").string();
  const auto r = run(dir, "--seed 5 --out " + out + " ber-sweep --adders exact:12 --corpus " +
                              (dir / "corpus.txt").string() + " --modulation BPSK --runs 1");
  REQUIRE(r.code == 0);
  const auto csv = testing::slurp(out);
  CHECK(count_lines(csv) == 27);
  CHECK(csv.find("exact_12,BPSK,-15,") != std::string::npos);
  CHECK(csv.find("exact_12,BPSK,10,") != std::string::npos);
}

TEST_CASE("ber-sweep is reproducible, records runs and replays from its manifest") {
  const auto dir = testing::scratch_dir("cli_sweep_repro");
  testing::spit(dir / "corpus.txt", kCorpus);
  testing::spit(dir / "cfg.json", R"({"snr_db_range": [-8, 0], "modulation": "all"})");
  const std::string common = " ber-sweep --config " + (dir / "cfg.json").string() +
                             " --adders exact:12,loa:12:5 --corpus " +
                             (dir / "corpus.txt").string() + " --runs 12";
  REQUIRE(run(dir, "--seed 11 --jobs 1 --out " + (dir / "a.csv").string() + common).code == 0);
  REQUIRE(run(dir, "--seed 11 --jobs 4 --out " + (dir / "b.csv").string() + common).code == 0);
  const auto a = testing::slurp(dir / "a.csv");
  CHECK(a == testing::slurp(dir / "b.csv"));
  CHECK(count_lines(a) == 1 + 2 * 3 * 2);
  CHECK(a.find(",12,") != std::string::npos);

  const auto m = read_json(dir / "a.csv.manifest.json");
  CHECK(m.at("resolved_config").at("runs_per_snr") == 12);
  CHECK(m.at("master_seed") == 11);

  // Library equivalence.
  auto cfg = pipeline_config_from_json(m.at("resolved_config"));
  const auto lib = ber_csv(ber_sweep(cfg, resolve_adders("exact:12,loa:12:5"), kCorpus, 2));
  CHECK(lib == a);

  const auto replay = run(dir, "--out " + (dir / "c.csv").string() + " ber-sweep --config " +
                                   (dir / "a.csv.manifest.json").string());
  REQUIRE(replay.code == 0);
  CHECK(testing::slurp(dir / "c.csv") == a);
}

TEST_CASE("ber-sweep without a seed announces and records one") {
  const auto dir = testing::scratch_dir("cli_sweep_seed");
  testing::spit(dir / "corpus.txt", kCorpus);
  testing::spit(dir / "cfg.json", R"({"snr_db_range": [0], "modulation": "BPSK", "runs_per_snr": 1})");
  const auto r = run(dir, "--out " + (dir / "x.csv").string() + " ber-sweep --config " +
                              (dir / "cfg.json").string() + " --adders exact:12 --corpus " +
                              (dir / "corpus.txt").string());
  REQUIRE(r.code == 0);
  const auto pos = r.err.find("seed: ");
  REQUIRE(pos != std::string::npos);
  const std::uint64_t seed = std::stoull(r.err.substr(pos + 6));
  CHECK(read_json(dir / "x.csv.manifest.json").at("master_seed").get<std::uint64_t>() == seed);
}

TEST_CASE("ber-sweep config errors are listed together") {
  const auto dir = testing::scratch_dir("cli_sweep_badcfg");
  testing::spit(dir / "corpus.txt", kCorpus);
  testing::spit(dir / "cfg.json", R"({"samples_per_bit": 1, "runs_per_snr": 0})");
  const auto r = run(dir, "--seed 1 ber-sweep --config " + (dir / "cfg.json").string() +
                              " --adders exact:12 --corpus " + (dir / "corpus.txt").string());
  CHECK(r.code == 1);
  CHECK(r.err.find("samples_per_bit") != std::string::npos);
  CHECK(r.err.find("runs_per_snr") != std::string::npos);
}

TEST_CASE("pos-tag on the shipped fixture") {
  const auto dir = testing::scratch_dir("cli_pos");
  const std::string args = " pos-tag --model " + data("pos/hmm.json") + " --sentences " +
                           data("pos/sentences.txt") + " --gold " + data("pos/gold.txt");
  const auto r = run(dir, "--out " + (dir / "acc.csv").string() + args +
                              " --adders exact:16,loa:16:0@k0,trunc:16:12");
  REQUIRE(r.code == 0);
  const auto csv = testing::slurp(dir / "acc.csv");
  std::istringstream in(csv);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);
  CHECK(lines[1] == "float_oracle,100,11");
  CHECK(lines[2] == "exact_16,100,11");
  CHECK(lines[3] == "k0,100,11");
  CHECK(fs::exists(dir / "acc.csv.manifest.json"));

  testing::spit(dir / "empty.txt", "\n\n");
  const auto e = run(dir, "pos-tag --model " + data("pos/hmm.json") + " --sentences " +
                              (dir / "empty.txt").string() + " --gold " + data("pos/gold.txt"));
  CHECK(e.code == 2);

  testing::spit(dir / "short_gold.txt", "DET NOUN\nDET\n");
  const auto m = run(dir, "pos-tag --model " + data("pos/hmm.json") + " --sentences " +
                              data("pos/sentences.txt") + " --gold " +
                              (dir / "short_gold.txt").string());
  CHECK(m.code == 1);
}

TEST_CASE("dse on the comm fixture without a budget") {
  const auto dir = testing::scratch_dir("cli_dse_comm");
  const auto r = run(dir, "--out " + (dir / "front.csv").string() + " dse --accuracy " +
                              data("fixtures/comm_accuracy.csv") + " --costs " +
                              data("fixtures/comm_costs.csv") + " --metric ber --baseline CLA");
  REQUIRE(r.code == 0);
  const auto csv = testing::slurp(dir / "front.csv");
  CHECK(count_lines(csv) == 16);
  std::size_t plotted = 0;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    plotted += line.rfind("CLA,", 0) != 0 && line.ends_with(",0");
  CHECK(plotted == 8);

  using namespace approxvit::dse;
  const auto pts = join_points(load_accuracy(testing::slurp(data("fixtures/comm_accuracy.csv")),
                                             MetricKind::kBer),
                               MetricKind::kBer,
                               load_costs(testing::slurp(data("fixtures/comm_costs.csv"))))
                       .points;
  CHECK(report_csv(build_report(pts, pareto_front(pts))) == csv);
  CHECK(r.err.find("add12u_187,21.5,") != std::string::npos);
}

TEST_CASE("dse power budget on the nlp fixture, json output") {
  const auto dir = testing::scratch_dir("cli_dse_nlp");
  const auto r = run(dir, "--out " + (dir / "c.json").string() + " dse --accuracy " +
                              data("fixtures/nlp_accuracy.csv") + " --costs " +
                              data("fixtures/nlp_costs.csv") +
                              " --metric accuracy --max-power 120");
  REQUIRE(r.code == 0);
  const auto j = read_json(dir / "c.json");
  REQUIRE(j.size() == 4);
  for (const auto& row : j) CHECK(row.at("accuracy").get<double>() <= 60.0);
  CHECK(read_json(dir / "c.json.manifest.json").at("resolved_config").at("max_power") == 120.0);
}

TEST_CASE("dse input errors") {
  const auto dir = testing::scratch_dir("cli_dse_bad");
  const auto r = run(dir, "dse --accuracy " + data("fixtures/nlp_accuracy.csv") +
                              " --costs " + (dir / "nope.csv").string() + " --metric accuracy");
  CHECK(r.code == 1);
  CHECK(r.err.find("nope.csv") != std::string::npos);
  CHECK(run(dir, "dse --accuracy x").code == 2);
  CHECK(run(dir, "dse --accuracy " + data("fixtures/nlp_accuracy.csv") + " --costs " +
                     data("fixtures/nlp_costs.csv") + " --metric speed")
            .code == 2);
}

}  // TEST_SUITE("cli")
