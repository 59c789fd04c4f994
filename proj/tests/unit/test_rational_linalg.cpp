#include <gtest/gtest.h>

#include "lattest/errors.hpp"
#include "lattest/linalg.hpp"
#include "lattest/rational.hpp"
#include "oracles.hpp"

using namespace lattest;

namespace {

std::vector<oracle::IntRow> int_rows(const RatMatrix& m) {
  std::vector<oracle::IntRow> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    oracle::IntRow r;
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_num().get_si());
    out.push_back(r);
  }
  return out;
}

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST(Rational, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_rational("3/6"), q(1, 2));
  EXPECT_EQ(parse_rational(" -7 "), q(-7));
  EXPECT_EQ(parse_rational("+4/-8"), q(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), InvalidInput);
  EXPECT_THROW(parse_rational("0.5"), InvalidInput);
  EXPECT_THROW(parse_rational(""), InvalidInput);
}

TEST(Rational, RoundingHelpers) {
  EXPECT_EQ(round_half_away(q(7, 2)), 4);
  EXPECT_EQ(round_half_away(q(-7, 2)), -4);
  EXPECT_EQ(round_half_away(q(5, 4)), 1);
  EXPECT_EQ(floor_of(q(-1, 3)), -1);
  EXPECT_EQ(ceil_of(q(-1, 3)), 0);
  EXPECT_EQ(frac_distance(q(7, 3)), q(1, 3));
  EXPECT_EQ(frac_distance(q(-5, 2)), q(1, 2));
  EXPECT_EQ(mod_floor(Integer(-3), Integer(4)), 1);
}

TEST(Rational, NormPowers) {
  const RatVector v = {q(1, 2), q(-3), q(0)};
  EXPECT_EQ(norm_pow(v, 1), q(7, 2));
  EXPECT_EQ(norm_pow(v, 2), q(37, 4));
}

TEST(Hnf, MatchesCanonicalForms) {
  EXPECT_EQ(hnf(RatMatrix::from_rows({{2, 0}, {1, 1}})), RatMatrix::from_rows({{1, 1}, {0, 2}}));
  EXPECT_EQ(hnf(RatMatrix::identity(3)), RatMatrix::identity(3));
  EXPECT_EQ(hnf(RatMatrix::from_rows({{0, 3}, {3, 0}})), RatMatrix::from_rows({{3, 0}, {0, 3}}));
}

TEST(Hnf, GeneratesTheSameLatticeAsItsInput) {
  for (const auto& m : {RatMatrix::from_rows({{2, 0}, {1, 1}}), RatMatrix::from_rows({{0, 3}, {3, 0}}),
                        RatMatrix::from_rows({{4, 2}, {2, 6}, {6, 8}})}) {
    const RatMatrix h = hnf(m);
    EXPECT_EQ(oracle::box_points(int_rows(m), 8, 4), oracle::box_points(int_rows(h), 8, 4));
  }
}

TEST(Hnf, DropsDependentRowsAndRejectsFractions) {
  const RatMatrix h = hnf(RatMatrix::from_rows({{2, 4}, {1, 2}, {3, 6}}));
  EXPECT_EQ(h, RatMatrix::from_rows({{1, 2}}));
  RatMatrix f(1, 1);
  f(0, 0) = q(1, 2);
  EXPECT_THROW(hnf(f), InvalidInput);
}

TEST(Determinant, SmallCases) {
  EXPECT_EQ(determinant(RatMatrix::from_rows({{1, 1}, {0, 2}})), 2);
  EXPECT_EQ(determinant(RatMatrix::identity(5)), 1);
  EXPECT_EQ(abs(determinant(RatMatrix::from_rows({{2, 0}, {1, 1}}))),
            std::labs(oracle::cofactor_det({{2, 0}, {1, 1}})));
  EXPECT_THROW(determinant(RatMatrix::from_rows({{1, 2}, {2, 4}})), SingularMatrix);
  EXPECT_THROW(determinant(RatMatrix(2, 3)), InvalidInput);
}

TEST(Determinant, AgreesWithCofactorExpansion) {
  const std::vector<oracle::IntRow> m = {{3, 1, 4, 1}, {5, 9, 2, 6}, {5, 3, 5, 8}, {9, 7, 9, 3}};
  RatMatrix r(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r(i, j) = m[i][j];
  EXPECT_EQ(determinant(r), oracle::cofactor_det(m));
}

TEST(Solve, Examples) {
  const RatMatrix b = RatMatrix::from_rows({{1, 0, 2}, {0, 1, 3}});
  const auto x = solve(b, make_vector({1, 1, 5}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, make_vector({1, 1}));
  const RatVector t = {q(1, 2), q(3)};
  EXPECT_EQ(*solve(RatMatrix::identity(2), t), t);
  EXPECT_FALSE(solve(b, make_vector({0, 0, 1})).has_value());
}

TEST(Dual, Examples) {
  RatMatrix half(2, 2);
  half(0, 0) = q(1, 2);
  half(1, 1) = q(1, 2);
  EXPECT_EQ(dual_basis(RatMatrix::from_rows({{2, 0}, {0, 2}})), half);
  EXPECT_EQ(dual_basis(RatMatrix::identity(4)), RatMatrix::identity(4));
  const RatMatrix b = RatMatrix::from_rows({{1, 1}, {0, 2}});
  const RatMatrix d = dual_basis(b);
  RatMatrix expected(2, 2);
  expected(0, 0) = 1;
  expected(1, 0) = q(-1, 2);
  expected(1, 1) = q(1, 2);
  EXPECT_EQ(d, expected);
}

TEST(Dual, KroneckerPropertyForSpanDual) {
  const RatMatrix b = RatMatrix::from_rows({{1, 0, 2}, {0, 1, 3}});
  const RatMatrix d = span_dual_basis(b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(dot(d.row(i), b.row(j)), i == j ? 1 : 0);
  // Rows of the span dual lie in span(B).
  for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(solve(b, d.row(i)).has_value());
}

TEST(Complement, Examples) {
  const RatMatrix c = orthogonal_complement_basis(RatMatrix::from_rows({{1, 0, 2}, {0, 1, 3}}));
  ASSERT_EQ(c.rows(), 1u);
  EXPECT_EQ(dot(c.row(0), make_vector({1, 0, 2})), 0);
  EXPECT_EQ(dot(c.row(0), make_vector({0, 1, 3})), 0);
  // Proportional to (2, 3, -1).
  EXPECT_EQ(c(0, 0) * 3, c(0, 1) * 2);
  EXPECT_EQ(c(0, 0), -2 * c(0, 2));
  EXPECT_EQ(orthogonal_complement_basis(RatMatrix::identity(3)).rows(), 0u);
  const RatMatrix e = orthogonal_complement_basis(RatMatrix::from_rows({{1, 0, 0}}));
  EXPECT_EQ(e.rows(), 2u);
  EXPECT_EQ(rank(e), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(e(i, 0), 0);
}

TEST(Projector, IdempotentAndSymmetric) {
  const RatMatrix p = span_projector(RatMatrix::from_rows({{1, 0, 2}, {0, 1, 3}}));
  EXPECT_EQ(p * p, p);
  EXPECT_EQ(p.transpose(), p);
}

TEST(Inverse, TimesOriginalIsIdentity) {
  const RatMatrix a = RatMatrix::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  EXPECT_EQ(a * inverse(a), RatMatrix::identity(3));
  EXPECT_THROW(inverse(RatMatrix::from_rows({{1, 2}, {2, 4}})), SingularMatrix);
}
