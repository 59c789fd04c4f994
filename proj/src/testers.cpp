#include "lattest/testers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lattest/errors.hpp"
#include "lattest/linalg.hpp"

namespace lattest {

namespace {

void check_unit_open(const Rational& x, const char* what) {
  if (sgn(x) <= 0 || x >= 1) throw InvalidInput(std::string(what) + " must lie in (0, 1)");
}

Rational power(const Rational& x, int p) { return p == 1 ? x : Rational(x * x); }

}  // namespace

Rational far_threshold_pow(const Rational& eps, int p, std::size_t n) {
  check_norm_index(p);
  return power(eps, p) * static_cast<unsigned long>(n);
}

IntegerLatticeTester::IntegerLatticeTester(std::size_t n, Rational eps_pow, std::size_t q)
    : n_(n), eps_pow_(std::move(eps_pow)), q_(q) {}

IntegerLatticeTester::IntegerLatticeTester(std::size_t n, const Rational& eps, const Rational& s, int p, double c_z)
    : IntegerLatticeTester(with_eps_pow(n, (check_norm_index(p), power(eps, p)), s, c_z)) {
  check_unit_open(eps, "epsilon");
}

IntegerLatticeTester IntegerLatticeTester::with_eps_pow(std::size_t n, const Rational& eps_pow, const Rational& s,
                                                        double c_z) {
  check_unit_open(eps_pow, "epsilon^p");
  const std::size_t q = std::max<std::size_t>(1, repetitions_for(c_z, 1.0 / eps_pow.get_d(), s));
  return IntegerLatticeTester(n, eps_pow, q);
}

Verdict IntegerLatticeTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != n_) throw InvalidInput("integer tester: input dimension mismatch");
  // Draw every index first so the random stream does not depend on the input.
  for (auto i : sample_indices(n_, q_, rng)) {
    if (!is_integer(input.query(i))) return Verdict::kReject;
  }
  return Verdict::kAccept;
}

TolerantIntegerTester::TolerantIntegerTester(std::size_t n, Rational eps1, Rational eps2, const Rational& c,
                                             const Rational& s, double c_t)
    : n_(n), eps1_(std::move(eps1)), eps2_(std::move(eps2)) {
  if (sgn(eps1_) < 0 || eps2_ <= eps1_) throw InvalidInput("tolerant tester needs 0 <= eps1 < eps2");
  const Rational gamma = std::min(c, s);
  const double gap = Rational(eps2_ - eps1_).get_d();
  q_ = std::max<std::size_t>(1, repetitions_for(c_t, 1.0 / (gap * gap), gamma));
  threshold_ = (eps1_ + eps2_) / 2;
}

Verdict TolerantIntegerTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != n_) throw InvalidInput("tolerant integer tester: input dimension mismatch");
  Rational total(0);
  for (auto i : sample_indices(n_, q_, rng)) total += frac_distance(input.query(i));
  const Rational delta = total / static_cast<unsigned long>(q_);
  return verdict_of(delta <= threshold_);
}

LatticeBasis knapsack_lattice(const std::vector<long>& a) {
  const std::size_t n = a.size() + 1;
  RatMatrix b(a.size(), n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    b(i, i) = 1;
    b(i, n - 1) = a[i];
  }
  return LatticeBasis(std::move(b));
}

Integer knapsack_weight(const std::vector<long>& a, int p) {
  check_norm_index(p);
  Integer m(0);
  for (long x : a) {
    Integer v = abs(Integer(x));
    if (p == 2) v *= v;
    m = std::max(m, v);
  }
  return m;
}

DistanceResult knapsack_distance(const std::vector<long>& a, std::span<const Rational> w, int p) {
  check_norm_index(p);
  const std::size_t k = a.size();
  if (w.size() != k + 1) throw InvalidInput("knapsack_distance: dimension mismatch");
  Rational last(0);
  for (std::size_t i = 0; i < k; ++i) last += a[i] * w[i];
  if (last != w[k]) throw InvalidInput("knapsack_distance: input is not in the span of the lattice");

  auto full_cost = [&](const std::vector<Integer>& z) {
    Rational cost(0), tail(0);
    for (std::size_t i = 0; i < k; ++i) {
      const Rational diff = w[i] - z[i];
      cost += abs_pow(diff, p);
      tail += a[i] * diff;
    }
    return Rational(cost + abs_pow(tail, p));
  };

  std::vector<Integer> best_z(k);
  for (std::size_t i = 0; i < k; ++i) best_z[i] = round_half_away(w[i]);
  Rational best = full_cost(best_z);

  // Any better point has |w_i - z_i|^p <= best for each i.
  const double radius = std::pow(best.get_d(), 1.0 / p) + 1.0;
  std::vector<Integer> lo(k), hi(k);
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = floor_of(w[i] - Rational(radius));
    hi[i] = ceil_of(w[i] + Rational(radius));
  }

  auto witness_of = [&](const std::vector<Integer>& z) {
    RatVector v(k + 1);
    Integer s(0);
    for (std::size_t i = 0; i < k; ++i) {
      v[i] = z[i];
      s += a[i] * z[i];
    }
    v[k] = s;
    return v;
  };
  RatVector best_witness = witness_of(best_z);

  std::vector<Integer> z(k);
  // Depth-first in increasing lexicographic order; prune partial sums above
  // the incumbent, keeping ties so the smallest witness wins.
  auto dfs = [&](auto&& self, std::size_t i, const Rational& partial) -> void {
    if (partial > best) return;
    if (i == k) {
      const Rational c = full_cost(z);
      const RatVector wit = witness_of(z);
      if (c < best || (c == best && wit < best_witness)) {
        best = c;
        best_witness = wit;
      }
      return;
    }
    for (Integer v = lo[i]; v <= hi[i]; ++v) {
      z[i] = v;
      self(self, i + 1, partial + abs_pow(w[i] - v, p));
    }
  };
  dfs(dfs, 0, Rational(0));

  DistanceResult out;
  out.p = p;
  out.dist_pow_p = best;
  out.witness = std::move(best_witness);
  return out;
}

KnapsackTester::KnapsackTester(std::vector<long> a, const Rational& eps, const Rational& s, int p, double c_z)
    : a_(std::move(a)),
      inner_(IntegerLatticeTester::with_eps_pow(
          a_.size(), power(eps, p) / Rational(knapsack_weight(a_, p) + 1), s, c_z)) {
  check_unit_open(eps, "epsilon");
  if (a_.empty()) throw InvalidInput("knapsack tester needs n >= 2");
}

Verdict KnapsackTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != dim()) throw InvalidInput("knapsack tester: input dimension mismatch");
  QueryAccess prefix(a_.size(), [&input](std::size_t i) { return input.query(i); });
  return inner_.run(prefix, rng);
}

LiftedOutsideSpanTester::LiftedOutsideSpanTester(const LatticeBasis& l, TesterPtr span_tester, Rational eps_prime,
                                                 int p)
    : n_(l.dim()), span_tester_(std::move(span_tester)), eps_prime_(std::move(eps_prime)), p_(p) {
  check_norm_index(p_);
  if (!span_tester_ || span_tester_->dim() != n_) throw InvalidInput("span tester dimension mismatch");
  support_ = support_of_complement(l);
  if (!support_.empty()) complement_projector_ = span_projector(orthogonal_complement_basis(l.basis()));
}

Verdict LiftedOutsideSpanTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != n_) throw InvalidInput("lifted tester: input dimension mismatch");
  std::map<std::size_t, Rational> perp;
  if (!support_.empty()) {
    std::vector<Rational> seen;
    seen.reserve(support_.size());
    for (auto j : support_) seen.push_back(input.query(j));
    RatVector t_perp;
    for (auto i : support_) {
      Rational v(0);
      for (std::size_t b = 0; b < support_.size(); ++b) v += complement_projector_(i, support_[b]) * seen[b];
      t_perp.push_back(v);
    }
    if (norm_pow(t_perp, p_) >= far_threshold_pow(eps_prime_ / 2, p_, n_)) return Verdict::kReject;
    for (std::size_t b = 0; b < support_.size(); ++b) perp.emplace(support_[b], seen[b] - t_perp[b]);
  }
  // Coordinates in P are already known; everything else is read through.
  QueryAccess parallel(n_, [&input, &perp](std::size_t i) {
    const auto it = perp.find(i);
    return it != perp.end() ? it->second : input.query(i);
  });
  return span_tester_->run(parallel, rng);
}

OutsideSpanGadget outside_span_gadget(const LatticeBasis& l, const Rational& eps, int p) {
  check_norm_index(p);
  if (l.full_rank()) throw InvalidInput("outside-span gadget needs a lattice of rank below n");
  OutsideSpanGadget g;
  g.support = support_of_complement(l);
  const RatMatrix proj = span_projector(orthogonal_complement_basis(l.basis()));
  Rational min_diag = proj(g.support.front(), g.support.front());
  for (auto j : g.support) min_diag = std::min(min_diag, proj(j, j));
  const auto n = static_cast<unsigned long>(l.dim());
  Rational target = eps * eps * n;
  if (p == 1) target *= n;
  const Integer need = ceil_of(target / min_diag);
  Integer d;
  mpz_sqrt(d.get_mpz_t(), need.get_mpz_t());
  if (d * d < need) ++d;
  g.scale = std::max(d, Integer(1));
  return g;
}

RatVector far_instance_outside_span(const LatticeBasis& l, const Rational& eps, int p, Rng& rng) {
  const OutsideSpanGadget g = outside_span_gadget(l, eps, p);
  RatVector t(l.dim(), Rational(0));
  t[g.support[static_cast<std::size_t>(rng.below(g.support.size()))]] = g.scale;
  return t;
}

}  // namespace lattest
