#include <doctest.h>

#include <cmath>
#include <random>

#include "approxvit/errors.hpp"
#include "approxvit/pos.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace approxvit;
using namespace approxvit::pos;

namespace {

std::vector<std::string> random_sentence(std::mt19937_64& rng, const HmmModel& h,
                                         std::size_t len) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(h.vocab[rng() % h.vocab.size()]);
  return s;
}

HmmModel load_fixture() {
  return HmmModel::from_json(
      nlohmann::json::parse(testing::slurp(testing::data_path("pos/hmm.json"))));
}

}  // namespace

TEST_SUITE("pos") {

TEST_CASE("cost quantization") {
  CHECK(quantize_cost(1.0, 1024, 32) == 0);
  CHECK(quantize_cost(std::exp(-1.0), 1024, 32) == 1024);
  CHECK(quantize_cost(0.0, 1024, 32) == 32768);
  CHECK(quantize_cost(1e-30, 1024, 32) == 32768);
  std::mt19937_64 rng(1);
  const auto h = oracle::random_hmm(rng, 2, 2);
  CHECK_THROWS_AS(quantize_hmm(h, 4096, 16), ParameterError);
  CHECK_NOTHROW(quantize_hmm(h, 4096, 15));
}

TEST_CASE("quantized costs are monotone in probability") {
  double prev_p = 0;
  std::uint32_t prev_c = quantize_cost(0, 2048, 30);
  for (int i = 1; i <= 2000; ++i) {
    const double p = std::pow(static_cast<double>(i) / 2000.0, 3.0);
    const auto c = quantize_cost(p, 2048, 30);
    REQUIRE(p >= prev_p);
    REQUIRE(c <= prev_c);
    prev_p = p;
    prev_c = c;
  }
}

TEST_CASE("single word picks argmin of initial plus emission") {
  std::mt19937_64 rng(2);
  const auto h = oracle::random_hmm(rng, 4, 5);
  const auto q = quantize_hmm(h);
  const auto exact = AdderModel::exact(16);
  for (std::size_t w = 0; w < 5; ++w) {
    const std::vector<std::string> s{h.vocab[w]};
    std::size_t best = 0;
    for (std::size_t t = 1; t < 4; ++t)
      if (q.initial[t] + q.emission[t * 5 + w] < q.initial[best] + q.emission[best * 5 + w])
        best = t;
    CHECK(tag(q, s, exact) == TagSequence{best});
  }
}

TEST_CASE("deterministic emissions force a unique path") {
  HmmModel h;
  h.tags = {"D", "N", "V"};
  h.vocab = {"the", "dog", "runs"};
  h.initial = {0.6, 0.3, 0.1};
  h.transition = {0.1, 0.8, 0.1, 0.2, 0.2, 0.6, 0.5, 0.3, 0.2};
  h.emission = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const auto q = quantize_hmm(h);
  const std::vector<std::string> s{"runs", "the", "dog", "dog"};
  CHECK(tag(q, s, AdderModel::exact(16)) == TagSequence{2, 0, 1, 1});
  CHECK(float_viterbi(h, s) == TagSequence{2, 0, 1, 1});
}

TEST_CASE("uniform model ties resolve to the lowest tag") {
  HmmModel h;
  h.tags = {"A", "B", "C"};
  h.vocab = {"x", "y"};
  h.initial.assign(3, 1.0 / 3);
  h.transition.assign(9, 1.0 / 3);
  h.emission.assign(6, 0.5);
  const auto q = quantize_hmm(h);
  const std::vector<std::string> s{"x", "y", "x", "zzz"};
  CHECK(tag(q, s, AdderModel::exact(16)) == TagSequence{0, 0, 0, 0});
  CHECK(float_viterbi(h, s) == TagSequence{0, 0, 0, 0});
}

TEST_CASE("float viterbi returns an optimal enumerated path") {
  std::mt19937_64 rng(5);
  int unique = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = oracle::random_hmm(rng, 4, 6);
    const auto s = random_sentence(rng, h, 6);
    const auto best = oracle::optimal_paths(h, s);
    REQUIRE(oracle::is_optimal(best, float_viterbi(h, s)));
    unique += best.size() == 1;
  }
  CHECK(unique > 50);
}

TEST_CASE("exact ties follow the lowest-index traceback") {
  // Rows are permutations of each other, so many paths share one score.
  HmmModel h;
  h.tags = {"A", "B"};
  h.vocab = {"x"};
  h.initial = {0.5, 0.5};
  h.transition = {0.5, 0.5, 0.5, 0.5};
  h.emission = {1, 1};
  const std::vector<std::string> s{"x", "x", "x"};
  const auto best = oracle::optimal_paths(h, s);
  CHECK(best.size() == 8);
  CHECK(best.front() == TagSequence{0, 0, 0});
  CHECK(best[1] == TagSequence{1, 0, 0});
  CHECK(float_viterbi(h, s) == best.front());
}

TEST_CASE("fixed-point tagging with large scale equals float") {
  std::mt19937_64 rng(8);
  const auto exact = AdderModel::exact(16);
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = oracle::random_hmm(rng, 3 + rng() % 4, 5 + rng() % 4);
    const auto q = quantize_hmm(h, 4096, 15);
    const auto s = random_sentence(rng, h, 1 + rng() % 8);
    const auto tr = tag_trace(q, s, exact);
    REQUIRE_FALSE(tr.saturated);
    REQUIRE(tr.tags == float_viterbi(h, s));
  }
}

TEST_CASE("normalized cost vectors and repeatability") {
  std::mt19937_64 rng(13);
  const auto h = oracle::random_hmm(rng, 5, 7);
  const auto q = quantize_hmm(h);
  const auto s = random_sentence(rng, h, 12);
  const auto loa = make_parametric(AdderKind::kLowerOr, 16, 6);
  const auto tr = tag_trace(q, s, loa);
  REQUIRE(tr.costs.size() == s.size());
  for (const auto& c : tr.costs) CHECK(*std::min_element(c.begin(), c.end()) == 0);
  CHECK(tag_trace(q, s, loa).tags == tr.tags);
}

TEST_CASE("k=0 adder tags exactly like the exact adder") {
  std::mt19937_64 rng(17);
  const auto exact = AdderModel::exact(16);
  const auto k0 = make_parametric(AdderKind::kTruncated, 16, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto h = oracle::random_hmm(rng, 5, 8, 0.001);
    const auto q = quantize_hmm(h);
    const auto s = random_sentence(rng, h, 10);
    REQUIRE(tag_trace(q, s, exact).costs == tag_trace(q, s, k0).costs);
  }
}

TEST_CASE("adder width and input checks") {
  std::mt19937_64 rng(1);
  const auto q = quantize_hmm(oracle::random_hmm(rng, 2, 2));
  const std::vector<std::string> s{"w0"};
  CHECK_THROWS_AS(tag(q, s, AdderModel::exact(12)), ConfigError);
  CHECK_THROWS_AS(tag(q, {}, AdderModel::exact(16)), InputError);
}

TEST_CASE("accuracy ratio") {
  CHECK(accuracy({1, 2, 3}, {1, 2, 3}) == 100.0);
  CHECK(accuracy({1, 2, 3}, {0, 0, 0}) == 0.0);
  TagSequence p(11, 0), g(11, 0);
  for (int i = 0; i < 3; ++i) g[i] = 1;
  CHECK(accuracy(p, g) == doctest::Approx(72.7272727).epsilon(1e-6));
  CHECK_THROWS_AS(accuracy({1}, {1, 2}), InputError);
}

TEST_CASE("model json round trip and validation") {
  std::mt19937_64 rng(4);
  const auto h = oracle::random_hmm(rng, 3, 4);
  const auto back = HmmModel::from_json(h.to_json());
  CHECK(back.transition == h.transition);
  auto j = h.to_json();
  j["initial"]["T0"] = 0.9;
  CHECK_THROWS_AS(HmmModel::from_json(j), InputError);
  j = h.to_json();
  j["emission"]["T9"] = nlohmann::json::object();
  CHECK_THROWS_AS(HmmModel::from_json(j), InputError);
}

TEST_CASE("shipped fixture is tagged perfectly by the exact adder") {
  const auto h = load_fixture();
  const auto sentences = parse_sentences(testing::slurp(testing::data_path("pos/sentences.txt")));
  const auto gold = parse_gold(testing::slurp(testing::data_path("pos/gold.txt")), h.tags);
  REQUIRE(check_alignment(sentences, gold).empty());
  const auto oracle_score = score_float_oracle(h, sentences, gold);
  CHECK(oracle_score.accuracy_pct == 100.0);
  CHECK(oracle_score.adder == "float_oracle");
  const auto s = score_tagger(quantize_hmm(h), sentences, gold, AdderModel::exact(16));
  CHECK(s.accuracy_pct == 100.0);
  CHECK(s.sentence_accuracy_pct == 100.0);
  CHECK(s.tokens == 11);
}

TEST_CASE("misaligned gold is listed per sentence") {
  const std::vector<Sentence> s{{"a", "b"}, {"c"}};
  const std::vector<TagSequence> g{{0}, {0}};
  const auto errs = check_alignment(s, g);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("sentence 1") != std::string::npos);
}

TEST_CASE("scores csv") {
  const std::vector<TaggingScore> rows{{"exact_16", 100.0, 11, 100.0},
                                       {"loa_16_8", 72.72727272727273, 11, 0}};
  CHECK(scores_csv(rows) ==
        "adder,accuracy_pct,tokens\nexact_16,100,11\nloa_16_8,72.72727272727273,11\n");
}

}  // TEST_SUITE("pos")
