#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lattest/rational.hpp"

namespace lattest {

/// Integral lattice given by linearly independent integer basis rows
/// (rank k rows, dimension n columns). k = 0 is the zero lattice.
class LatticeBasis {
 public:
  /// Throws InvalidInput unless rows are integral and linearly independent.
  explicit LatticeBasis(RatMatrix basis);
  /// Canonical (HNF) basis of the lattice generated by arbitrary integer rows.
  static LatticeBasis from_generators(const RatMatrix& generators);
  static LatticeBasis integer_lattice(std::size_t n, long scale = 1);

  const RatMatrix& basis() const { return basis_; }
  std::size_t rank() const { return basis_.rows(); }
  std::size_t dim() const { return basis_.cols(); }
  bool full_rank() const { return rank() == dim(); }

 private:
  RatMatrix basis_;
};

bool membership(const LatticeBasis& l, std::span<const Rational> t);

/// |det(L)| of a full-rank lattice (RankError otherwise).
Rational lattice_determinant(const LatticeBasis& l);

inline constexpr std::size_t kDefaultCosetCap = std::size_t{1} << 20;

/// d with d*Z^n inside L and the coset representatives V = L mod d, stored
/// as vectors over {0,...,d-1} sorted lexicographically.
class ModulusStructure {
 public:
  ModulusStructure(std::int64_t d, std::size_t dim, std::vector<std::int64_t> flat_reps);

  std::int64_t d() const { return d_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 1 : reps_.size() / dim_; }
  std::span<const std::int64_t> rep(std::size_t i) const { return {reps_.data() + i * dim_, dim_}; }
  /// Whether a residue vector (entries in [0, d)) belongs to V.
  bool contains(std::span<const std::int64_t> residue) const;
  /// Prop-style membership: an integer vector lies in L iff its residue does.
  bool contains_integer(std::span<const Rational> v) const;
  /// Index of `residue` in the sorted representative list, if present.
  std::ptrdiff_t index_of(std::span<const std::int64_t> residue) const;

  IntVector reduce(std::span<const std::int64_t> v) const;
  IntVector add(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const;

 private:
  std::int64_t d_;
  std::size_t dim_;
  std::vector<std::int64_t> reps_;
};

/// Smallest d with d*Z^n inside L, found as the lcm of the denominators of
/// B^{-1} (d*e_i lies in L exactly when d*e_i*B^{-1} is integral), together
/// with V enumerated by additive closure of the basis rows mod d. Throws
/// RankError for non-full-rank lattices and ResourceLimit when |V| > cap.
ModulusStructure find_modulus(const LatticeBasis& l, std::size_t cap = kDefaultCosetCap);

struct DistanceResult {
  int p = 1;
  Rational dist_pow_p;  // d_p(t, L)^p
  RatVector witness;    // a closest lattice vector, lexicographically smallest
};

/// Exact d_p(t, L)^p for p in {1, 2}, as the minimum over cosets v in V of
/// sum_i min_z |t_i - v_i - d z|^p.
DistanceResult distance_oracle(const ModulusStructure& m, std::span<const Rational> t, int p);

/// Minimal ||v||_p^p over nonzero v in L.
DistanceResult shortest_vector(const ModulusStructure& m, int p);

struct SpanProjection {
  RatVector parallel;     // orthogonal projection of t onto span(L)
  Rational perp_pow_p;    // ||t - parallel||_p^p
};

SpanProjection project_to_span(const LatticeBasis& l, std::span<const Rational> t, int p = 1);

/// Coordinates (0-based, increasing) on which span(L)^perp is not
/// identically zero. Empty for full-rank lattices.
std::vector<std::size_t> support_of_complement(const LatticeBasis& l);

void check_norm_index(int p);

}  // namespace lattest
