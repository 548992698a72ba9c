#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "approxvit/conv_code.hpp"
#include "approxvit/errors.hpp"
#include "approxvit/viterbi.hpp"
#include "oracles.hpp"

using namespace approxvit;

namespace {

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  Bits b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1u);
  return b;
}

Bits from_string(const std::string& s) {
  Bits b;
  for (char c : s)
    if (c == '0' || c == '1') b.push_back(static_cast<std::uint8_t>(c - '0'));
  return b;
}

std::size_t hamming(const Bits& a, const Bits& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

TEST_SUITE("conv_code") {

TEST_CASE("hand-traced encoder output") {
  const auto code = ConvCode::standard_k3();
  CHECK(conv_encode(code, from_string("1011"), false) == from_string("11 10 00 01"));
  CHECK(conv_encode(code, from_string("1011"), true) == from_string("11 10 00 01 01 11"));
  CHECK(conv_encode(code, {}, false).empty());
  CHECK(conv_encode(code, {}, true) == from_string("00 00"));
}

TEST_CASE("octal round trip and validation") {
  const auto code = ConvCode::from_octal(7, {"171", "133"});
  CHECK(code.generators() == std::vector<std::uint32_t>{0171, 0133});
  CHECK(code.generators_octal() == std::vector<std::string>{"171", "133"});
  CHECK(code.num_states() == 64);
  CHECK_THROWS_AS(ConvCode(3, {}), ParameterError);
  CHECK_THROWS_AS(ConvCode(3, {0}), ParameterError);
  CHECK_THROWS_AS(ConvCode(3, {8}), ParameterError);
  CHECK_THROWS_AS(ConvCode(1, {1}), ParameterError);
  CHECK_THROWS_AS(ConvCode::from_octal(3, {"9"}), ParameterError);
}

TEST_CASE("trellis degrees and shift-register convention") {
  std::mt19937_64 rng(1);
  for (unsigned K = 2; K <= 7; ++K) {
    const std::uint32_t top = 1u << K;
    const ConvCode code(K, {static_cast<std::uint32_t>(rng() % (top - 1) + 1),
                            static_cast<std::uint32_t>(rng() % (top - 1) + 1)});
    const Trellis t(code);
    REQUIRE(t.num_states() == (1u << (K - 1)));
    std::vector<int> in_degree(t.num_states(), 0);
    for (std::uint32_t s = 0; s < t.num_states(); ++s) {
      for (unsigned u = 0; u < 2; ++u) {
        const auto nx = t.next_state(s, u);
        CHECK(nx == ((u << (K - 2)) | (s >> 1)));
        CHECK(t.input_into(nx) == u);
        ++in_degree[nx];
      }
      CHECK(t.next_state(s, 0) != t.next_state(s, 1));
    }
    for (std::uint32_t s = 0; s < t.num_states(); ++s) {
      CHECK(in_degree[s] == 2);
      for (unsigned w = 0; w < 2; ++w) {
        const auto p = t.predecessor(s, w);
        CHECK(t.next_state(p, t.input_into(s)) == s);
      }
      CHECK(t.predecessor(s, 0) < t.predecessor(s, 1));
    }
  }
}

}  // TEST_SUITE("conv_code")

TEST_SUITE("viterbi") {

TEST_CASE("branch metric") {
  const std::uint8_t z[] = {0, 0}, o[] = {1, 1}, x[] = {1, 0}, y[] = {0, 1};
  CHECK(branch_metric(z, o) == 2);
  CHECK(branch_metric(x, x) == 0);
  CHECK(branch_metric(y, o) == 1);
  const std::uint8_t three[] = {0, 0, 0};
  CHECK_THROWS_AS(branch_metric(z, three), InputError);
}

TEST_CASE("single ACS step on a two-state trellis") {
  const Trellis t(ConvCode(2, {3, 1}));
  const auto exact = AdderModel::exact(12);
  // bm[2*s+u]: leaving s on u. Into state 0 (u=0): from 0 costs 1, from 1 costs 3.
  const unsigned bms[] = {1, 0, 3, 0};
  const auto r = acs_step({2, 5}, bms, t, exact, 12);
  CHECK(r.metrics[0] + r.offset == 3);
  CHECK(r.decisions[0] == 0);
  CHECK(r.metrics[1] + r.offset == 2);
  CHECK(*std::min_element(r.metrics.begin(), r.metrics.end()) == 0);

  const unsigned tie[] = {0, 0, 0, 0};
  const auto r2 = acs_step({4, 4}, tie, t, exact, 12);
  CHECK(r2.decisions[0] == 0);
  CHECK(r2.decisions[1] == 0);
}

TEST_CASE("two-state ACS with an all-approximate lower-or adder") {
  const Trellis t(ConvCode(2, {3, 1}));
  const unsigned w = 8;
  const auto loa = make_parametric(AdderKind::kLowerOr, w, w);
  const std::uint64_t sat = (1u << w) - 1;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const PathMetrics pm{static_cast<std::uint32_t>(rng() % 256),
                         static_cast<std::uint32_t>(rng() % 256)};
    std::vector<unsigned> bm(4);
    for (auto& b : bm) b = static_cast<unsigned>(rng() % 3);
    const auto r = acs_step(pm, bm, t, loa, w);
    std::uint64_t want[2];
    std::uint8_t dec[2];
    for (std::uint32_t s = 0; s < 2; ++s) {
      const unsigned u = s;  // K=2: the state is the last input
      const std::uint64_t c0 = std::min(oracle::lower_or(pm[0], bm[0 + u], w, w), sat);
      const std::uint64_t c1 = std::min(oracle::lower_or(pm[1], bm[2 + u], w, w), sat);
      want[s] = std::min(c0, c1);
      dec[s] = c1 < c0;
    }
    const std::uint64_t low = std::min(want[0], want[1]);
    for (std::uint32_t s = 0; s < 2; ++s) {
      REQUIRE(r.metrics[s] == want[s] - low);
      REQUIRE(r.decisions[s] == dec[s]);
    }
    REQUIRE(r.offset == low);
  }
}

TEST_CASE("ACS shift invariance and normalization") {
  const Trellis t(ConvCode(5, {023, 035}));
  const auto exact = AdderModel::exact(16);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    PathMetrics pm(t.num_states());
    for (auto& m : pm) m = static_cast<std::uint32_t>(rng() % 100);
    std::vector<unsigned> bm(2 * t.num_states());
    for (auto& b : bm) b = static_cast<unsigned>(rng() % 3);
    const std::uint32_t c = static_cast<std::uint32_t>(rng() % 1000);
    PathMetrics shifted = pm;
    for (auto& m : shifted) m += c;
    const auto a = acs_step(pm, bm, t, exact, 16);
    const auto b = acs_step(shifted, bm, t, exact, 16);
    REQUIRE(a.metrics == b.metrics);
    REQUIRE(a.decisions == b.decisions);
    REQUIRE(b.offset == a.offset + c);
    REQUIRE(*std::min_element(a.metrics.begin(), a.metrics.end()) == 0);
  }
}

TEST_CASE("ACS saturates at the word width") {
  const Trellis t(ConvCode(2, {3, 1}));
  const auto exact = AdderModel::exact(8);
  const unsigned bms[] = {2, 2, 2, 2};
  const auto r = acs_step({0, 15}, bms, t, exact, 4);
  // From state 0 both successors cost 2; from state 1 the sum clips at 15.
  CHECK(r.metrics[0] == 0);
  CHECK(r.offset == 2);
  const unsigned big[] = {2, 2, 2, 2};
  const auto r2 = acs_step({14, 15}, big, t, exact, 4);
  CHECK(r2.offset == 15);
  CHECK(r2.metrics == PathMetrics{0, 0});
  CHECK_THROWS_AS(acs_step({16, 0}, big, t, exact, 4), InputError);
  CHECK_THROWS_AS(acs_step({0, 0}, big, t, exact, 9), ParameterError);
}

TEST_CASE("decode examples") {
  const auto code = ConvCode::standard_k3();
  const auto exact = AdderModel::exact(12);
  CHECK(viterbi_decode(code, conv_encode(code, from_string("1011"), true), exact) ==
        from_string("1011"));
  CHECK(viterbi_decode(code, {}, exact).empty());
  CHECK_THROWS_AS(viterbi_decode(code, from_string("101"), exact), FramingError);
  CHECK_THROWS_AS(viterbi_decode(code, from_string("10"), exact), FramingError);
  CHECK_THROWS_AS(viterbi_decode(code, from_string("1011"), AdderModel::exact(8)),
                  ParameterError);
}

TEST_CASE("noiseless round trip for K up to 7") {
  std::mt19937_64 rng(23);
  const std::vector<ConvCode> codes = {
      ConvCode::standard_k3(), ConvCode::from_octal(4, {"15", "17"}),
      ConvCode::from_octal(5, {"23", "35"}), ConvCode::from_octal(7, {"171", "133"}),
      ConvCode::from_octal(3, {"7", "5", "3"})};
  const auto exact = AdderModel::exact(12);
  for (const auto& code : codes) {
    for (int i = 0; i < 20; ++i) {
      const auto msg = random_bits(rng, 1 + rng() % 3000);
      REQUIRE(viterbi_decode(code, conv_encode(code, msg, true), exact) == msg);
    }
  }
}

TEST_CASE("unflushed decoding recovers all but the trailing bits") {
  std::mt19937_64 rng(29);
  const auto code = ConvCode::standard_k3();
  const auto exact = AdderModel::exact(12);
  const auto msg = random_bits(rng, 500);
  const auto out = viterbi_decode(code, conv_encode(code, msg, false), exact,
                                  {12, false});
  REQUIRE(out.size() == msg.size());
  // Noiseless: the zero-metric path is the transmitted one.
  CHECK(out == msg);
}

TEST_CASE("single error in 1000 bits is corrected") {
  std::mt19937_64 rng(31);
  const auto code = ConvCode::standard_k3();
  const auto exact = AdderModel::exact(12);
  const auto msg = random_bits(rng, 1000);
  const auto tx = conv_encode(code, msg, true);
  for (int trial = 0; trial < 100; ++trial) {
    auto rx = tx;
    rx[rng() % rx.size()] ^= 1u;
    REQUIRE(viterbi_decode(code, rx, exact) == msg);
  }
}

TEST_CASE("decoder output is a maximum-likelihood codeword") {
  // Brute force over every message of length L: the decoded codeword must sit
  // at the minimum Hamming distance from the received word.
  std::mt19937_64 rng(37);
  const auto code = ConvCode::standard_k3();
  const auto exact = AdderModel::exact(12);
  for (std::size_t L = 1; L <= 9; ++L) {
    std::vector<Bits> book;
    for (std::uint32_t m = 0; m < (1u << L); ++m) {
      Bits b(L);
      for (std::size_t i = 0; i < L; ++i) b[i] = (m >> i) & 1u;
      book.push_back(conv_encode(code, b, true));
    }
    for (int trial = 0; trial < 40; ++trial) {
      auto rx = book[rng() % book.size()];
      for (auto& bit : rx)
        if (rng() % 5 == 0) bit ^= 1u;
      std::size_t best = rx.size() + 1;
      for (const auto& cw : book) best = std::min(best, hamming(cw, rx));
      const auto dec = viterbi_decode(code, rx, exact);
      REQUIRE(hamming(conv_encode(code, dec, true), rx) == best);
    }
  }
}

TEST_CASE("k=0 adder decodes identically to exact on noisy input") {
  std::mt19937_64 rng(41);
  const auto code = ConvCode::from_octal(5, {"23", "35"});
  const auto exact = AdderModel::exact(12);
  const auto k0 = make_parametric(AdderKind::kLowerOr, 12, 0);
  for (int trial = 0; trial < 30; ++trial) {
    auto rx = conv_encode(code, random_bits(rng, 400), true);
    for (auto& bit : rx)
      if (rng() % 8 == 0) bit ^= 1u;
    const auto a = viterbi_decode_trace(code, rx, exact);
    const auto b = viterbi_decode_trace(code, rx, k0);
    REQUIRE(a.decoded == b.decoded);
    REQUIRE(a.decisions.bits == b.decisions.bits);
  }
}

TEST_CASE("final metrics stay normalized and bounded") {
  std::mt19937_64 rng(43);
  const auto code = ConvCode::standard_k3();
  const auto loa = make_parametric(AdderKind::kLowerOr, 12, 6);
  auto rx = random_bits(rng, 2000);
  const auto tr = viterbi_decode_trace(code, rx, loa, {6, true});
  CHECK(*std::min_element(tr.final_metrics.begin(), tr.final_metrics.end()) == 0);
  for (auto m : tr.final_metrics) CHECK(m <= 63u);
  CHECK(tr.decoded.size() == 998);
}

}  // TEST_SUITE("viterbi")
