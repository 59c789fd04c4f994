#include <gtest/gtest.h>

#include "lattest/codeformula.hpp"
#include "lattest/errors.hpp"
#include "oracles.hpp"

using namespace lattest;

namespace {

const CodeFormulaLattice& toy() {
  static const CodeFormulaLattice l = CodeFormulaLattice::reed_muller({1, 2}, 3);
  return l;
}

const ModulusStructure& toy_modulus() {
  static const ModulusStructure m = find_modulus(toy().basis());
  return m;
}

double accept_rate(const Tester& t, const RatVector& x, int trials, std::uint64_t seed) {
  int acc = 0;
  for (int i = 0; i < trials; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    acc += execute(t, x, rng).accepted();
  }
  return acc / double(trials);
}

BitVector bits_of(unsigned mask, std::size_t n) {
  BitVector w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (mask >> i) & 1u;
  return w;
}

}  // namespace

TEST(CodeFormulaLattice, RejectsBadFamilies) {
  EXPECT_THROW(CodeFormulaLattice::reed_muller({1, 1}, 3), NotALattice);
  EXPECT_THROW(CodeFormulaLattice::build({}), InvalidInput);
}

TEST(CodeFormulaLattice, TrivialFamilies) {
  EXPECT_EQ(CodeFormulaLattice::build({BinaryLinearCode::full(3)}).basis().basis(), RatMatrix::identity(3));
  const auto two = CodeFormulaLattice::build({BinaryLinearCode::zero(3)}).basis().basis();
  EXPECT_EQ(two, LatticeBasis::integer_lattice(3, 2).basis());
}

TEST(CodeFormulaLattice, ToyLatticeEqualsCodeSum) {
  // Every element of C0 + 2 C1 lies in L, and det(L) = 4^8 / |C0 + 2 C1 mod 4|.
  const auto reps = oracle::toy_cosets();
  for (const auto& r : reps) EXPECT_TRUE(membership(toy().basis(), RatVector(r.begin(), r.end())));
  EXPECT_EQ(lattice_determinant(toy().basis()) * static_cast<unsigned long>(reps.size()), Rational(65536));
  EXPECT_EQ(toy().rm_degrees(), (std::vector<int>{1, 2}));
  EXPECT_EQ(toy().height(), 2u);
}

TEST(BitDecompose, Examples) {
  const auto d = bit_decompose(make_vector({5, 2}), 2);
  ASSERT_EQ(d.planes.size(), 2u);
  EXPECT_EQ(d.planes[0], (BitVector{1, 0}));
  EXPECT_EQ(d.planes[1], (BitVector{0, 1}));
  EXPECT_EQ(d.residual, make_vector({1, 0}));
  const RatVector half = {Rational(7, 2)};
  const auto h = bit_decompose(half, 2);
  EXPECT_EQ(h.planes[0], (BitVector{0}));
  EXPECT_EQ(h.planes[1], (BitVector{0}));
  EXPECT_EQ(plane_bit(Rational(-1), 0, 2), 1);
  EXPECT_EQ(plane_bit(Rational(-1), 1, 2), 1);
  EXPECT_EQ(plane_bit(Rational(7, 2), 0, 2), 0);
}

TEST(BitDecompose, ReconstructsInput) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    RatVector t(6);
    for (auto& x : t) {
      x = Rational(static_cast<long>(rng.below(81)) - 40, 4);
      x.canonicalize();
    }
    const auto d = bit_decompose(t, 3);
    for (std::size_t j = 0; j < t.size(); ++j) {
      Rational sum = d.residual[j] * 8;
      for (std::size_t b = 0; b < 3; ++b) sum += Rational(d.planes[b][j] << b);
      EXPECT_EQ(sum, t[j]);
    }
  }
}

TEST(Sandwich, HoldsForEveryBinaryWord) {
  for (std::size_t k = 0; k < 2; ++k) {
    for (unsigned mask = 0; mask < 256; ++mask) {
      const auto s = distance_sandwich_check(toy(), toy_modulus(), k, bits_of(mask, 8));
      EXPECT_TRUE(s.holds()) << "k=" << k << " mask=" << mask;
    }
  }
}

TEST(Sandwich, FrozenExample) {
  // Odd-weight word against the even-weight code at level 1.
  const auto s = distance_sandwich_check(toy(), toy_modulus(), 1, bits_of(1, 8));
  EXPECT_EQ(s.lower, 1);
  EXPECT_EQ(s.upper, 2);
  EXPECT_EQ(s.lattice, 2);
}

TEST(DistanceOracle, TriangleInequality) {
  Rng rng(21);
  for (int i = 0; i < 60; ++i) {
    RatVector t(8), u(8);
    for (std::size_t j = 0; j < 8; ++j) {
      t[j] = Rational(static_cast<long>(rng.below(33)) - 16, 4);
      u[j] = Rational(static_cast<long>(rng.below(9)) - 4, 4);
      t[j].canonicalize();
      u[j].canonicalize();
    }
    RatVector tu(8);
    for (std::size_t j = 0; j < 8; ++j) tu[j] = t[j] + u[j];
    EXPECT_LE(distance_oracle(toy_modulus(), tu, 1).dist_pow_p,
              distance_oracle(toy_modulus(), t, 1).dist_pow_p + norm_pow(u, 1));
  }
}

TEST(Registry, MissingLevelIsConfigError) {
  CodeTesterRegistry r;
  EXPECT_FALSE(r.has(0));
  EXPECT_THROW(r.get(0), ConfigError);
  const auto rm = CodeTesterRegistry::for_reed_muller(toy());
  EXPECT_TRUE(rm.has(0));
  EXPECT_TRUE(rm.has(1));
  EXPECT_THROW(CodeFormulaTester(toy(), CodeTesterRegistry{}, Rational(1, 4), Rational(1, 3)), ConfigError);
}

TEST(CodeFormulaTester, BudgetIsSumOfStages) {
  const CodeFormulaTester t(toy(), CodeTesterRegistry::for_reed_muller(toy()), Rational(1, 4), Rational(1, 3));
  std::size_t sum = t.integer_stage().query_budget();
  for (const auto& c : t.code_stages()) sum += c->query_budget();
  EXPECT_EQ(t.query_budget(), sum);
  ASSERT_EQ(t.code_stages().size(), 2u);
  // Integer stage at eps/2 = 1/8: ceil(2 * 8 * ln 3) = 18.
  EXPECT_EQ(t.integer_stage().query_budget(), 18u);
  for (const auto& c : t.code_stages()) EXPECT_GT(c->query_budget(), 0u);
}

TEST(CodeFormulaTester, AcceptsMembers) {
  const CodeFormulaTester t(toy(), CodeTesterRegistry::for_reed_muller(toy()), Rational(1, 4), Rational(1, 3));
  EXPECT_EQ(accept_rate(t, RatVector(8, Rational(1)), 200, 1), 1.0);
  Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    const auto r = toy_modulus().rep(rng.below(toy_modulus().size()));
    RatVector x(r.begin(), r.end());
    for (auto& v : x) v += 4 * (static_cast<long>(rng.below(5)) - 2);
    EXPECT_EQ(accept_rate(t, x, 10, 3 + i), 1.0);
  }
}

TEST(CodeFormulaTester, RejectsHalfIntegralInput) {
  const CodeFormulaTester t(toy(), CodeTesterRegistry::for_reed_muller(toy()), Rational(1, 4), Rational(1, 3));
  EXPECT_EQ(accept_rate(t, RatVector(8, Rational(1, 2)), 100, 5), 0.0);
}

TEST(ScaledCodeTester, AcceptsCodewordsOfTheLevel) {
  auto lt = std::make_shared<CodeFormulaTester>(toy(), CodeTesterRegistry::for_reed_muller(toy()), Rational(1, 4),
                                                Rational(1, 3));
  const auto t = code_tester_from_lattice_tester(lt, 1);
  for (const auto& w : rm_code(2, 3).code.codewords()) EXPECT_EQ(accept_rate(*t, bits_to_rational(w), 3, 8), 1.0);
}

TEST(TolerantCodeFormula, ValidationAndCompleteness) {
  const auto reg = CodeTesterRegistry::for_reed_muller(toy());
  // m 2^{m+1} = 16, so eps2 must exceed 16 eps1.
  EXPECT_THROW(TolerantCodeFormulaTester(toy(), reg, Rational(1, 64), Rational(1, 4), Rational(1, 3), Rational(1, 3)),
               InvalidInput);
  const TolerantCodeFormulaTester t(toy(), reg, Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 3));
  std::size_t sum = t.integer_stage().query_budget();
  for (const auto& c : t.code_stages()) sum += c->query_budget();
  EXPECT_EQ(t.query_budget(), sum);
  EXPECT_GE(accept_rate(t, RatVector(8, Rational(1)), 100, 6), 0.9);
}
