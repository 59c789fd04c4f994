#include <gtest/gtest.h>

#include "lattest/codeformula.hpp"
#include "lattest/errors.hpp"
#include "lattest/lattice.hpp"
#include "lattest/testers.hpp"
#include "oracles.hpp"

using namespace lattest;

namespace {

const LatticeBasis& toy() {
  static const LatticeBasis l = CodeFormulaLattice::reed_muller({1, 2}, 3).basis();
  return l;
}

const ModulusStructure& toy_modulus() {
  static const ModulusStructure m = find_modulus(toy());
  return m;
}

RatVector random_rational(Rng& rng, std::size_t n, long range, long den) {
  RatVector t(n);
  for (auto& x : t) {
    x = Rational(static_cast<long>(rng.below(2 * range * den + 1)) - range * den, den);
    x.canonicalize();
  }
  return t;
}

// Shortest nonzero vector by coset scan: the zero coset contributes d^p.
Rational shortest_by_cosets(const std::vector<oracle::IntRow>& v, long d, int p) {
  Rational best = p == 1 ? Rational(d) : Rational(d * d);
  for (const auto& rep : v) {
    if (std::all_of(rep.begin(), rep.end(), [](long x) { return x == 0; })) continue;
    RatVector r(rep.begin(), rep.end());
    best = std::min(best, oracle::coset_distance({oracle::IntRow(rep.size(), 0)}, d, r, p));
  }
  return best;
}

}  // namespace

TEST(LatticeBasis, RejectsBadBases) {
  RatMatrix f(1, 2);
  f(0, 0) = Rational(1, 2);
  EXPECT_THROW(LatticeBasis{f}, InvalidInput);
  EXPECT_THROW(LatticeBasis(RatMatrix::from_rows({{1, 2}, {2, 4}})), InvalidInput);
}

TEST(Membership, Examples) {
  const LatticeBasis ks(RatMatrix::from_rows({{1, 0, 2}, {0, 1, 3}}));
  EXPECT_TRUE(membership(ks, make_vector({1, 1, 5})));
  EXPECT_TRUE(membership(ks, make_vector({0, 0, 0})));
  EXPECT_FALSE(membership(ks, make_vector({0, 0, 1})));
  EXPECT_FALSE(membership(LatticeBasis::integer_lattice(2, 2), make_vector({1, 0})));
  EXPECT_TRUE(membership(toy(), make_vector({1, 1, 1, 1, 1, 1, 1, 1})));
}

TEST(Modulus, SmallExamples) {
  const auto z2 = find_modulus(LatticeBasis::integer_lattice(2));
  EXPECT_EQ(z2.d(), 1);
  EXPECT_EQ(z2.size(), 1u);
  const auto two = find_modulus(LatticeBasis::integer_lattice(2, 2));
  EXPECT_EQ(two.d(), 2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(std::vector<std::int64_t>(two.rep(0).begin(), two.rep(0).end()), (std::vector<std::int64_t>{0, 0}));
}

TEST(Modulus, ToyLatticeMatchesCodeEnumeration) {
  const auto& m = toy_modulus();
  EXPECT_EQ(m.d(), 4);
  EXPECT_EQ(m.size(), 2048u);
  const auto expected = oracle::toy_cosets();
  ASSERT_EQ(expected.size(), 2048u);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto r = m.rep(i);
    EXPECT_EQ(oracle::IntRow(r.begin(), r.end()), expected[i]);
  }
  // |V| * det = d^n.
  EXPECT_EQ(lattice_determinant(toy()) * 2048, Rational(65536));
  EXPECT_EQ(lattice_determinant(toy()), 32);
}

TEST(Modulus, Errors) {
  EXPECT_THROW(find_modulus(knapsack_lattice({2, 3})), RankError);
  EXPECT_THROW(lattice_determinant(knapsack_lattice({2, 3})), RankError);
  const LatticeBasis big(RatMatrix::from_rows({{1, 0, 1}, {0, 1, 1}, {0, 0, 2000}}));
  EXPECT_THROW(find_modulus(big), ResourceLimit);
  EXPECT_THROW(find_modulus(toy(), 100), ResourceLimit);
}

TEST(Modulus, ReduceAndContains) {
  const auto& m = toy_modulus();
  const std::vector<std::int64_t> ones(8, 1), fives(8, 5), minus3(8, -3);
  EXPECT_TRUE(m.contains(ones));
  EXPECT_EQ(m.reduce(fives), ones);
  EXPECT_EQ(m.reduce(minus3), ones);
  std::vector<std::int64_t> e1(8, 0);
  e1[0] = 1;
  EXPECT_FALSE(m.contains(e1));
}

TEST(DistanceOracle, Examples) {
  const auto z3 = find_modulus(LatticeBasis::integer_lattice(3));
  RatVector t = {Rational(1, 2), Rational(0), Rational(0)};
  EXPECT_EQ(distance_oracle(z3, t, 1).dist_pow_p, Rational(1, 2));
  EXPECT_EQ(distance_oracle(z3, t, 2).dist_pow_p, Rational(1, 4));
  const auto two = find_modulus(LatticeBasis::integer_lattice(2, 2));
  const auto r = distance_oracle(two, make_vector({1, 1}), 1);
  EXPECT_EQ(r.dist_pow_p, 2);
  // Lexicographically smallest of the four corners.
  EXPECT_EQ(r.witness, make_vector({0, 0}));
}

TEST(DistanceOracle, AgreesWithCosetScanOnToyLattice) {
  const auto reps = oracle::toy_cosets();
  Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    const RatVector t = random_rational(rng, 8, 6, 4);
    for (int p : {1, 2}) {
      const auto r = distance_oracle(toy_modulus(), t, p);
      EXPECT_EQ(r.dist_pow_p, oracle::coset_distance(reps, 4, t, p));
      EXPECT_TRUE(membership(toy(), r.witness));
      EXPECT_EQ(norm_pow(subtract(t, r.witness), p), r.dist_pow_p);
    }
  }
}

TEST(DistanceOracle, HalfScaledOddWordIsWithinSandwich) {
  // RM(2,3) is the even-weight code, so odd-weight words sit at Hamming
  // distance 1 from it; the lattice distance of 2w must lie in [1, 2].
  RatVector t(8, Rational(0));
  t[0] = 2;
  const auto d = distance_oracle(toy_modulus(), t, 1).dist_pow_p;
  EXPECT_GE(d, 1);
  EXPECT_LE(d, 2);
  EXPECT_EQ(d, 2);  // frozen: brute-force coset scan
}

TEST(ShortestVector, Examples) {
  EXPECT_EQ(shortest_vector(find_modulus(LatticeBasis::integer_lattice(4)), 1).dist_pow_p, 1);
  EXPECT_EQ(shortest_vector(find_modulus(LatticeBasis::integer_lattice(2, 2)), 1).dist_pow_p, 2);
}

TEST(ShortestVector, ToyLatticeFrozenValues) {
  const auto reps = oracle::toy_cosets();
  const auto l1 = shortest_vector(toy_modulus(), 1);
  const auto l2 = shortest_vector(toy_modulus(), 2);
  EXPECT_EQ(l1.dist_pow_p, shortest_by_cosets(reps, 4, 1));
  EXPECT_EQ(l2.dist_pow_p, shortest_by_cosets(reps, 4, 2));
  // Frozen from the coset scan: a weight-4 codeword of RM(1,3).
  EXPECT_EQ(l1.dist_pow_p, 4);
  EXPECT_EQ(l2.dist_pow_p, 4);
  EXPECT_TRUE(membership(toy(), l1.witness));
  EXPECT_EQ(norm_pow(l1.witness, 1), 4);
}

TEST(ProjectToSpan, Examples) {
  const LatticeBasis ks = knapsack_lattice({2, 3});
  const auto in = project_to_span(ks, make_vector({1, 1, 5}), 1);
  EXPECT_EQ(in.parallel, make_vector({1, 1, 5}));
  EXPECT_EQ(in.perp_pow_p, 0);
  const auto orth = project_to_span(ks, make_vector({2, 3, -1}), 1);
  EXPECT_EQ(orth.parallel, make_vector({0, 0, 0}));
  EXPECT_EQ(orth.perp_pow_p, 6);
  const LatticeBasis line(RatMatrix::from_rows({{1, 2}}));
  const auto p2 = project_to_span(line, make_vector({2, -1}), 2);
  EXPECT_EQ(p2.parallel, make_vector({0, 0}));
  EXPECT_EQ(p2.perp_pow_p, 5);
}

TEST(SupportOfComplement, Examples) {
  EXPECT_EQ(support_of_complement(knapsack_lattice({2, 3})), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(support_of_complement(knapsack_lattice({5, 1, 7, 2})), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_TRUE(support_of_complement(toy()).empty());
  EXPECT_EQ(support_of_complement(LatticeBasis(RatMatrix::from_rows({{1, 0, 0}}))),
            (std::vector<std::size_t>{1, 2}));
}

TEST(NormIndex, OnlyOneAndTwo) {
  EXPECT_THROW(check_norm_index(3), InvalidInput);
  EXPECT_NO_THROW(check_norm_index(2));
}
