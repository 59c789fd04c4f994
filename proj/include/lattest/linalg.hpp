#pragma once

#include <optional>
#include <vector>

#include "lattest/rational.hpp"

namespace lattest {

/// Row-style Hermite Normal Form of an integer matrix.
///
/// The result generates the same integer row lattice as `m` and keeps only the
/// nonzero rows: upper triangular in echelon form, every pivot positive, and
/// every entry above a pivot reduced into [0, pivot). Dependent input rows are
/// allowed; they vanish in the output. Throws InvalidInput on a non-integer
/// entry.
RatMatrix hnf(const RatMatrix& m);

/// Exact determinant of a square, nonsingular matrix (SingularMatrix
/// otherwise; InvalidInput when not square).
Rational determinant(const RatMatrix& b);

/// Returns x with x^T B = t when t lies in the rational row span of B. For
/// dependent rows the free coefficients are set to zero.
std::optional<RatVector> solve(const RatMatrix& b, std::span<const Rational> t);

std::size_t rank(const RatMatrix& m);

RatMatrix inverse(const RatMatrix& a);

/// Dual basis of a square nonsingular basis: row i of the result dotted with
/// row j of `b` is the Kronecker delta.
RatMatrix dual_basis(const RatMatrix& b);

/// Dual basis of a lattice with linearly independent rows that need not span
/// the whole space: D = (B B^T)^{-1} B. Rows of D lie in span(B) and satisfy
/// the same delta pattern as dual_basis. Coincides with dual_basis for square B.
RatMatrix span_dual_basis(const RatMatrix& b);

/// Rows spanning span(b)^perp: one primitive integer row per free column of
/// the echelon form of `b`, first nonzero entry positive. Empty (0 rows) when
/// `b` has full column rank. Throws InvalidInput on dependent rows.
RatMatrix orthogonal_complement_basis(const RatMatrix& b);

/// Orthogonal projector onto the row span of `b` (independent rows required):
/// B^T (B B^T)^{-1} B. Symmetric, so applying it to column or row vectors
/// agrees.
RatMatrix span_projector(const RatMatrix& b);

/// Reduced row echelon form over the rationals together with the pivot column
/// of each nonzero row.
struct Echelon {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;
};
Echelon reduced_echelon(const RatMatrix& m);

}  // namespace lattest
