#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lattest/codes.hpp"
#include "lattest/errors.hpp"
#include "oracles.hpp"

using namespace lattest;

namespace {

BitVector random_bits(Rng& rng, std::size_t n) {
  BitVector w(n);
  for (auto& b : w) b = static_cast<std::uint8_t>(rng.below(2));
  return w;
}

std::set<BitVector> as_set(const std::vector<BitVector>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(BinaryLinearCode, Validation) {
  EXPECT_THROW(BinaryLinearCode(3, {{1, 0}}), InvalidInput);
  EXPECT_THROW(BinaryLinearCode(2, {{1, 2}}), InvalidInput);
  EXPECT_THROW(BinaryLinearCode(2, {{1, 1}, {1, 1}}), InvalidInput);
  const auto c = BinaryLinearCode::from_spanning_set(3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  EXPECT_EQ(c.k(), 2u);
  EXPECT_TRUE(c.contains({1, 0, 1}));
  EXPECT_FALSE(c.contains({1, 0, 0}));
}

TEST(BinaryLinearCode, CodewordCap) {
  EXPECT_THROW(BinaryLinearCode::full(12).codewords(1000), ResourceLimit);
  EXPECT_EQ(BinaryLinearCode::zero(5).codewords().size(), 1u);
}

TEST(ReedMuller, DimensionsAndCodewords) {
  EXPECT_EQ(rm_code(1, 3).code.k(), 4u);
  EXPECT_EQ(rm_code(2, 3).code.k(), 7u);
  EXPECT_EQ(rm_code(0, 4).code.k(), 1u);
  EXPECT_EQ(rm_code(2, 4).code.k(), 11u);
  for (auto [k, r] : {std::pair{1, 3}, {2, 3}, {1, 4}, {2, 4}}) {
    const auto got = as_set(rm_code(k, r).code.codewords());
    const auto want = oracle::rm_codewords(k, r);
    EXPECT_EQ(got, std::set<BitVector>(want.begin(), want.end())) << "RM(" << k << "," << r << ")";
  }
}

TEST(ReedMuller, MinimumWeight) {
  for (auto [k, r] : {std::pair{1, 3}, {2, 3}, {1, 4}, {2, 4}}) {
    std::size_t best = 1u << r;
    for (const auto& w : rm_code(k, r).code.codewords())
      if (hamming_weight(w) > 0) best = std::min(best, hamming_weight(w));
    EXPECT_EQ(best, std::size_t{1} << (r - k));
  }
}

TEST(ReedMuller, SecondOrderInThreeVariablesIsEvenWeight) {
  for (const auto& w : oracle::rm_codewords(2, 3)) EXPECT_EQ(hamming_weight(w) % 2, 0u);
  EXPECT_EQ(oracle::rm_codewords(2, 3).size(), 128u);
}

TEST(Schur, Examples) {
  EXPECT_TRUE(schur_condition({rm_code(1, 3).code, rm_code(2, 3).code}));
  EXPECT_TRUE(schur_condition({rm_code(0, 3).code, rm_code(1, 3).code, rm_code(2, 3).code}));
  EXPECT_FALSE(schur_condition({rm_code(1, 3).code, rm_code(1, 3).code}));
  // Not nested.
  EXPECT_FALSE(schur_condition({rm_code(2, 3).code, rm_code(1, 3).code}));
  EXPECT_EQ(schur_product({1, 1, 0}, {0, 1, 1}), (BitVector{0, 1, 0}));
}

TEST(HammingOracle, AgreesWithEnumeration) {
  Rng rng(17);
  for (auto [k, r] : {std::pair{1, 3}, {2, 3}, {1, 4}}) {
    const auto code = rm_code(k, r).code;
    const auto words = oracle::rm_codewords(k, r);
    for (int i = 0; i < 40; ++i) {
      const auto w = random_bits(rng, code.n());
      const auto res = hamming_distance_oracle(code, w);
      EXPECT_EQ(res.dist, oracle::hamming_to(words, w));
      EXPECT_TRUE(code.contains(res.witness));
      EXPECT_EQ(hamming_distance(w, res.witness), res.dist);
    }
  }
}

TEST(HammingOracle, OddWordIsAtDistanceOneFromEvenWeightCode) {
  BitVector w(8, 0);
  w[0] = w[1] = w[2] = 1;
  EXPECT_EQ(hamming_distance_oracle(rm_code(2, 3).code, w).dist, 1u);
}

TEST(BitValue, RejectsNonBits) {
  EXPECT_EQ(bit_value(Rational(1)), 1);
  EXPECT_THROW(bit_value(Rational(2)), InvalidInput);
  EXPECT_THROW(bit_value(Rational(1, 2)), InvalidInput);
}

TEST(FlatTester, SampledFlatsAreAffineFlats) {
  const RmFlatTester t(rm_code(1, 4), CodeTesterSpec::for_reed_muller(1, Rational(1, 4), Rational(1, 3)));
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto f = t.sample_flat(rng);
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(std::set<std::size_t>(f.begin(), f.end()).size(), 4u);
    EXPECT_EQ(f[0] ^ f[1] ^ f[2] ^ f[3], 0u);
  }
}

TEST(FlatTester, NeverRejectsCodewords) {
  const auto tester = make_rm_tester(1, 4, Rational(1, 4), Rational(1, 3));
  Rng rng(8);
  for (const auto& w : rm_code(1, 4).code.codewords()) {
    Rng local = rng.split(w[0] + 2 * w[5]);
    EXPECT_TRUE(execute(*tester, bits_to_rational(w), local).accepted());
  }
}

TEST(FlatTester, RoundRejectionMatchesExactRate) {
  const RmFlatTester t(rm_code(1, 3), CodeTesterSpec::for_reed_muller(1, Rational(1, 4), Rational(1, 3)));
  Rng rng(99);
  const int rounds = 40000;
  for (int trial = 0; trial < 3; ++trial) {
    const auto w = random_bits(rng, 8);
    const double exact = oracle::flat_rejection_rate(w, 1, 3).get_d();
    int rejects = 0;
    for (int i = 0; i < rounds; ++i) {
      QueryAccess a = QueryAccess::over(bits_to_rational(w));
      rejects += !t.round_accepts(a, rng);
    }
    const double sd = std::sqrt(exact * (1 - exact) / rounds) + 1e-9;
    EXPECT_NEAR(rejects / double(rounds), exact, 5 * sd);
  }
}

TEST(FlatTester, BudgetFormula) {
  // ceil(8 * ln 3 * max(1, 1/(2 * 1/4))) = ceil(17.58) = 18 rounds of 4 queries.
  const auto spec = CodeTesterSpec::for_reed_muller(1, Rational(1, 4), Rational(1, 3));
  EXPECT_EQ(spec.repetitions, 18u);
  EXPECT_EQ(spec.total_budget(), 72u);
  EXPECT_EQ(make_rm_tester(3, 3, Rational(1, 4), Rational(1, 3))->query_budget(), 0u);
}

TEST(Majority, RepetitionCounts) {
  EXPECT_EQ(majority_repetitions(Rational(1)), 1u);
  // ceil(18 ln 3) = 20, bumped to odd.
  EXPECT_EQ(majority_repetitions(Rational(1, 3)), 21u);
}

TEST(TolerantCode, Validation) {
  const auto base = make_rm_tester(1, 3, Rational(1, 4), Rational(1, 3));
  const auto q = static_cast<long>(base->query_budget());
  EXPECT_THROW(TolerantCodeTester(base, Rational(1, 3 * q - 1), Rational(1, 2), 3), InvalidInput);
  EXPECT_THROW(TolerantCodeTester(base, Rational(0), Rational(1, 8), 3), InvalidInput);
  EXPECT_THROW(TolerantCodeTester(base, Rational(0), Rational(1, 2), 4), InvalidInput);
  EXPECT_NO_THROW(TolerantCodeTester(base, Rational(1, 3 * q), Rational(1, 2), 3));
}

TEST(TolerantCode, AcceptsCodewordsAndRejectsFarWord) {
  const auto base = make_rm_tester(1, 3, Rational(1, 4), Rational(1, 3));
  const auto t = TolerantCodeTester::with_confidence(base, Rational(0), Rational(1, 4), Rational(1, 10));
  Rng rng(3);
  for (const auto& w : rm_code(1, 3).code.codewords()) EXPECT_TRUE(execute(t, bits_to_rational(w), rng).accepted());
  // Weight-2 word: Hamming distance 2 = (1/4) * 8 from RM(1,3).
  BitVector far(8, 0);
  far[0] = far[1] = 1;
  ASSERT_EQ(oracle::hamming_to(oracle::rm_codewords(1, 3), far), 2u);
  int accepts = 0;
  for (int i = 0; i < 100; ++i) accepts += execute(t, bits_to_rational(far), rng).accepted();
  EXPECT_LE(accepts, 20);
}
