#include "lattest/linalg.hpp"

#include <utility>

#include "lattest/errors.hpp"

namespace lattest {

namespace {

using IntRow = std::vector<Integer>;

void combine_rows(IntRow& target, const Integer& a, const IntRow& x, const Integer& b, const IntRow& y) {
  for (std::size_t j = 0; j < target.size(); ++j) target[j] = a * x[j] + b * y[j];
}

}  // namespace

RatMatrix hnf(const RatMatrix& m) {
  if (!m.is_integral()) throw InvalidInput("hnf: matrix has non-integer entries");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<IntRow> a(rows, IntRow(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j).get_num();

  std::size_t pivot_row = 0;
  IntRow scratch_p(cols), scratch_i(cols);
  for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
    for (std::size_t i = pivot_row + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      if (a[pivot_row][col] == 0) {
        std::swap(a[pivot_row], a[i]);
        continue;
      }
      // Unimodular 2x2 step [[x, y], [-b/g, a/g]] zeroes a[i][col].
      const Integer pa = a[pivot_row][col];
      const Integer pb = a[i][col];
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), pa.get_mpz_t(), pb.get_mpz_t());
      const Integer ag = pa / g;
      const Integer bg = pb / g;
      combine_rows(scratch_p, x, a[pivot_row], y, a[i]);
      combine_rows(scratch_i, -bg, a[pivot_row], ag, a[i]);
      std::swap(a[pivot_row], scratch_p);
      std::swap(a[i], scratch_i);
    }
    if (a[pivot_row][col] == 0) continue;
    if (a[pivot_row][col] < 0)
      for (auto& v : a[pivot_row]) v = -v;
    const Integer& pivot = a[pivot_row][col];
    for (std::size_t i = 0; i < pivot_row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), pivot.get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[pivot_row][j];
    }
    ++pivot_row;
  }

  RatMatrix out(pivot_row, cols);
  for (std::size_t i = 0; i < pivot_row; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = Rational(a[i][j]);
  return out;
}

Echelon reduced_echelon(const RatMatrix& m) {
  RatMatrix r = m;
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
    std::size_t pick = lead;
    while (pick < r.rows() && sgn(r(pick, col)) == 0) ++pick;
    if (pick == r.rows()) continue;
    if (pick != lead)
      for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(pick, j), r(lead, j));
    const Rational inv = 1 / r(lead, col);
    for (std::size_t j = col; j < r.cols(); ++j) r(lead, j) *= inv;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead || sgn(r(i, col)) == 0) continue;
      const Rational f = r(i, col);
      for (std::size_t j = col; j < r.cols(); ++j) r(i, j) -= f * r(lead, j);
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(r), std::move(pivots)};
}

std::size_t rank(const RatMatrix& m) { return reduced_echelon(m).pivots.size(); }

Rational determinant(const RatMatrix& b) {
  if (b.rows() != b.cols()) throw InvalidInput("determinant: matrix is not square");
  RatMatrix a = b;
  const std::size_t n = a.rows();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pick = col;
    while (pick < n && sgn(a(pick, col)) == 0) ++pick;
    if (pick == n) throw SingularMatrix("determinant: matrix is singular");
    if (pick != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pick, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (sgn(a(i, col)) == 0) continue;
      const Rational f = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

std::optional<RatVector> solve(const RatMatrix& b, std::span<const Rational> t) {
  if (t.size() != b.cols()) throw InvalidInput("solve: dimension mismatch");
  // x^T B = t  <=>  B^T x = t; row-reduce the augmented system [B^T | t].
  const std::size_t k = b.rows();
  const std::size_t n = b.cols();
  RatMatrix aug(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = b(j, i);
    aug(i, k) = t[i];
  }
  const Echelon e = reduced_echelon(aug);
  RatVector x(k, Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == k) return std::nullopt;
    x[e.pivots[r]] = e.reduced(r, k);
  }
  return x;
}

RatMatrix inverse(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("inverse: matrix is not square");
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const Echelon e = reduced_echelon(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw SingularMatrix("inverse: matrix is singular");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

RatMatrix dual_basis(const RatMatrix& b) {
  if (b.rows() != b.cols()) throw InvalidInput("dual_basis: basis is not square");
  return inverse(b).transpose();
}

RatMatrix span_dual_basis(const RatMatrix& b) {
  if (b.rows() == 0) return RatMatrix(0, b.cols());
  const RatMatrix gram = b * b.transpose();
  return inverse(gram) * b;
}

RatMatrix orthogonal_complement_basis(const RatMatrix& b) {
  const std::size_t n = b.cols();
  const Echelon e = reduced_echelon(b);
  if (e.pivots.size() != b.rows()) throw InvalidInput("orthogonal_complement_basis: dependent rows");
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;

  RatMatrix out(0, n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RatVector x(n, Rational(0));
    x[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, free);
    // Scale to a primitive integer vector with positive leading entry.
    const Integer l = lcm_of_denominators(x);
    Integer g(0);
    for (auto& v : x) {
      v *= l;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    }
    Rational lead(0);
    for (const auto& v : x)
      if (sgn(v) != 0) {
        lead = v;
        break;
      }
    const Rational f = (sgn(lead) < 0 ? Rational(-1) : Rational(1)) / Rational(g);
    for (auto& v : x) v *= f;
    out.append_row(x);
  }
  return out;
}

RatMatrix span_projector(const RatMatrix& b) {
  if (b.rows() == 0) return RatMatrix(b.cols(), b.cols());
  if (rank(b) != b.rows()) throw InvalidInput("span_projector: dependent rows");
  return b.transpose() * span_dual_basis(b);
}

}  // namespace lattest
