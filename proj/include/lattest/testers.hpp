#pragma once

#include <cstddef>
#include <vector>

#include "lattest/lattice.hpp"
#include "lattest/query.hpp"
#include "lattest/rational.hpp"

namespace lattest {

inline constexpr double kIntegerTesterConstant = 2.0;
inline constexpr double kTolerantTesterConstant = 8.0;

/// Tester for Z^n: reads q = ceil(C_Z * (1/eps^p) * ln(1/s)) uniform
/// coordinates (with replacement) and rejects iff one is non-integral.
class IntegerLatticeTester final : public Tester {
 public:
  IntegerLatticeTester(std::size_t n, const Rational& eps, const Rational& s, int p = 1,
                       double c_z = kIntegerTesterConstant);
  /// Same tester parameterised directly by eps^p.
  static IntegerLatticeTester with_eps_pow(std::size_t n, const Rational& eps_pow, const Rational& s,
                                           double c_z = kIntegerTesterConstant);

  std::string name() const override { return "integer"; }
  std::size_t dim() const override { return n_; }
  std::size_t query_budget() const override { return q_; }
  Verdict run(QueryAccess& input, Rng& rng) const override;

  const Rational& eps_pow() const { return eps_pow_; }

 private:
  IntegerLatticeTester(std::size_t n, Rational eps_pow, std::size_t q);

  std::size_t n_;
  Rational eps_pow_;
  std::size_t q_;
};

/// Tolerant tester for Z^n in l1: estimates delta, the mean distance to the
/// nearest integer over q = ceil(C_T/(eps2-eps1)^2 * ln(1/min(c,s))) uniform
/// coordinates, and accepts iff delta <= (eps1+eps2)/2.
class TolerantIntegerTester final : public Tester {
 public:
  TolerantIntegerTester(std::size_t n, Rational eps1, Rational eps2, const Rational& c, const Rational& s,
                        double c_t = kTolerantTesterConstant);

  std::string name() const override { return "tolerant-integer"; }
  std::size_t dim() const override { return n_; }
  std::size_t query_budget() const override { return q_; }
  Verdict run(QueryAccess& input, Rng& rng) const override;

  const Rational& threshold() const { return threshold_; }

 private:
  std::size_t n_;
  Rational eps1_;
  Rational eps2_;
  Rational threshold_;
  std::size_t q_;
};

/// Rows (e_i, a_i) for i < n-1; a lattice of rank n-1 in Z^n.
LatticeBasis knapsack_lattice(const std::vector<long>& a);

/// max_i |a_i|^p.
Integer knapsack_weight(const std::vector<long>& a, int p);

/// Exact d_p(w, L)^p for w in the span of the knapsack lattice, by
/// branch-and-bound over the first n-1 coordinates of the lattice point.
DistanceResult knapsack_distance(const std::vector<long>& a, std::span<const Rational> w, int p);

/// Tester for inputs promised to lie in the span of a knapsack lattice: runs
/// the Z^{n-1} tester on the first n-1 coordinates at eps'^p = eps^p/(M+1).
/// Inputs outside the span void the guarantee; the verdict is then whatever
/// the integrality test returns.
class KnapsackTester final : public Tester {
 public:
  KnapsackTester(std::vector<long> a, const Rational& eps, const Rational& s, int p = 1,
                 double c_z = kIntegerTesterConstant);

  std::string name() const override { return "knapsack"; }
  std::size_t dim() const override { return a_.size() + 1; }
  std::size_t query_budget() const override { return inner_.query_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

 private:
  std::vector<long> a_;
  IntegerLatticeTester inner_;
};

/// Tester for arbitrary inputs built from a tester for inputs in span(L):
/// reads every coordinate of P, rejects when ||t_perp||_p^p >= (eps'/2)^p n,
/// otherwise runs the span tester on t_par = t - t_perp.
class LiftedOutsideSpanTester final : public Tester {
 public:
  LiftedOutsideSpanTester(const LatticeBasis& l, TesterPtr span_tester, Rational eps_prime, int p = 1);

  std::string name() const override { return "lifted[" + span_tester_->name() + "]"; }
  std::size_t dim() const override { return n_; }
  std::size_t query_budget() const override { return support_.size() + span_tester_->query_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

  const std::vector<std::size_t>& support() const { return support_; }

 private:
  std::size_t n_;
  TesterPtr span_tester_;
  Rational eps_prime_;
  int p_;
  std::vector<std::size_t> support_;
  RatMatrix complement_projector_;  // n x n, nonzero only on support x support
};

struct OutsideSpanGadget {
  std::vector<std::size_t> support;  // P, 0-based
  Integer scale;                     // D
};

/// Smallest integer D with D^2 * min_{j in P} (P_perp)_jj >= eps^2 n^{2/p},
/// where P_perp projects onto span(L)^perp. Then ||P_perp(D e_j)||_2 >= eps n^{1/p}
/// for every j in P, and ||.||_1 >= ||.||_2 gives the same bound for p = 1.
OutsideSpanGadget outside_span_gadget(const LatticeBasis& l, const Rational& eps, int p);

/// D e_j for j uniform in P. InvalidInput for full-rank lattices.
RatVector far_instance_outside_span(const LatticeBasis& l, const Rational& eps, int p, Rng& rng);

/// eps^p * n, the p-th power of the far threshold eps * ||1^n||_p.
Rational far_threshold_pow(const Rational& eps, int p, std::size_t n);

}  // namespace lattest
