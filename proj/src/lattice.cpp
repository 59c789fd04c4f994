#include "lattest/lattice.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "lattest/errors.hpp"
#include "lattest/linalg.hpp"

namespace lattest {

namespace {

struct IntVectorHash {
  std::size_t operator()(const IntVector& v) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto x : v) h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

bool lex_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool lex_less(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

void check_norm_index(int p) {
  if (p != 1 && p != 2) throw InvalidInput("norm index p must be 1 or 2");
}

LatticeBasis::LatticeBasis(RatMatrix basis) : basis_(std::move(basis)) {
  if (!basis_.is_integral()) throw InvalidInput("lattice basis must be integral");
  if (lattest::rank(basis_) != basis_.rows()) throw InvalidInput("lattice basis rows are linearly dependent");
}

LatticeBasis LatticeBasis::from_generators(const RatMatrix& generators) {
  return LatticeBasis(hnf(generators));
}

LatticeBasis LatticeBasis::integer_lattice(std::size_t n, long scale) {
  RatMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) b(i, i) = scale;
  return LatticeBasis(std::move(b));
}

bool membership(const LatticeBasis& l, std::span<const Rational> t) {
  if (t.size() != l.dim()) throw InvalidInput("membership: dimension mismatch");
  const auto x = solve(l.basis(), t);
  return x && all_integral(*x);
}

Rational lattice_determinant(const LatticeBasis& l) {
  if (!l.full_rank()) throw RankError("determinant requires a full-rank lattice");
  return abs(determinant(l.basis()));
}

ModulusStructure::ModulusStructure(std::int64_t d, std::size_t dim, std::vector<std::int64_t> flat_reps)
    : d_(d), dim_(dim), reps_(std::move(flat_reps)) {}

std::ptrdiff_t ModulusStructure::index_of(std::span<const std::int64_t> residue) const {
  if (residue.size() != dim_) throw InvalidInput("residue dimension mismatch");
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (lex_less(rep(mid), residue))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(residue.begin(), residue.end(), rep(lo).begin())) {
    return static_cast<std::ptrdiff_t>(lo);
  }
  return -1;
}

bool ModulusStructure::contains(std::span<const std::int64_t> residue) const { return index_of(residue) >= 0; }

bool ModulusStructure::contains_integer(std::span<const Rational> v) const {
  if (v.size() != dim_) throw InvalidInput("dimension mismatch");
  if (!all_integral(v)) return false;
  IntVector r(dim_);
  const Integer dd(static_cast<long>(d_));
  for (std::size_t i = 0; i < dim_; ++i) r[i] = mod_floor(v[i].get_num(), dd).get_si();
  return contains(r);
}

IntVector ModulusStructure::reduce(std::span<const std::int64_t> v) const {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = ((v[i] % d_) + d_) % d_;
  return out;
}

IntVector ModulusStructure::add(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (((a[i] + b[i]) % d_) + d_) % d_;
  return out;
}

ModulusStructure find_modulus(const LatticeBasis& l, std::size_t cap) {
  if (!l.full_rank()) throw RankError("find_modulus requires a full-rank lattice");
  const std::size_t n = l.dim();
  if (n == 0) return ModulusStructure(1, 0, {});
  const RatMatrix inv = inverse(l.basis());
  Integer d(1);
  for (std::size_t i = 0; i < n; ++i) d = lcm(d, lcm_of_denominators(inv.row(i)));

  // |V| = d^n / |det L|; refuse before enumerating anything too large.
  Integer expected;
  mpz_pow_ui(expected.get_mpz_t(), d.get_mpz_t(), n);
  expected /= lattice_determinant(l).get_num();
  if (!d.fits_slong_p() || expected > Integer(static_cast<unsigned long>(cap))) {
    throw ResourceLimit("coset count " + expected.get_str() + " exceeds cap " + std::to_string(cap));
  }
  const std::int64_t dd = d.get_si();

  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    IntVector g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = mod_floor(l.basis()(i, j).get_num(), d).get_si();
    gens.push_back(std::move(g));
  }

  std::unordered_set<IntVector, IntVectorHash> seen;
  std::deque<IntVector> frontier;
  IntVector zero(n, 0);
  seen.insert(zero);
  frontier.push_back(zero);
  while (!frontier.empty()) {
    IntVector u = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& g : gens) {
      IntVector w(n);
      for (std::size_t j = 0; j < n; ++j) w[j] = (u[j] + g[j]) % dd;
      if (seen.insert(w).second) {
        if (seen.size() > cap) throw ResourceLimit("coset enumeration exceeded cap");
        frontier.push_back(std::move(w));
      }
    }
  }

  std::vector<IntVector> sorted(seen.begin(), seen.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::int64_t> flat;
  flat.reserve(sorted.size() * n);
  for (const auto& v : sorted) flat.insert(flat.end(), v.begin(), v.end());
  return ModulusStructure(dd, n, std::move(flat));
}

DistanceResult distance_oracle(const ModulusStructure& m, std::span<const Rational> t, int p) {
  check_norm_index(p);
  const std::size_t n = m.dim();
  if (t.size() != n) throw InvalidInput("distance_oracle: dimension mismatch");
  const std::int64_t d = m.d();

  // Scale by the common denominator D so all costs are integers over D^p.
  const Integer den = lcm_of_denominators(t);
  std::vector<Integer> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = Rational(t[i] * den).get_num();

  // cost[i][r] / D^p = min_z |t_i - r - d z|^p, attained at witness y = r + d z.
  std::vector<std::vector<Integer>> cost(n, std::vector<Integer>(static_cast<std::size_t>(d)));
  std::vector<std::vector<Integer>> best_y(n, std::vector<Integer>(static_cast<std::size_t>(d)));
  const Integer dz(static_cast<long>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int64_t r = 0; r < d; ++r) {
      // Candidates r + d*z for z = floor((t_i - r)/d) and that plus one.
      Integer z0;
      const Integer num = scaled[i] - Integer(static_cast<long>(r)) * den;
      const Integer q = dz * den;
      mpz_fdiv_q(z0.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
      const Integer y0 = Integer(static_cast<long>(r)) + dz * z0;
      const Integer y1 = y0 + dz;
      Integer c0 = abs(scaled[i] - y0 * den);
      Integer c1 = abs(scaled[i] - y1 * den);
      if (p == 2) {
        c0 *= c0;
        c1 *= c1;
      }
      // Ties go to the smaller coordinate (y0 < y1).
      if (c1 < c0) {
        cost[i][static_cast<std::size_t>(r)] = c1;
        best_y[i][static_cast<std::size_t>(r)] = y1;
      } else {
        cost[i][static_cast<std::size_t>(r)] = c0;
        best_y[i][static_cast<std::size_t>(r)] = y0;
      }
    }
  }

  Integer best_cost;
  std::vector<Integer> best_witness;
  std::vector<Integer> candidate(n);
  Integer sum;
  for (std::size_t c = 0; c < m.size(); ++c) {
    const auto v = m.rep(c);
    sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += cost[i][static_cast<std::size_t>(v[i])];
    if (!best_witness.empty() && sum > best_cost) continue;
    for (std::size_t i = 0; i < n; ++i) candidate[i] = best_y[i][static_cast<std::size_t>(v[i])];
    if (best_witness.empty() || sum < best_cost || lex_less(candidate, best_witness)) {
      best_cost = sum;
      best_witness = candidate;
    }
  }

  DistanceResult out;
  out.p = p;
  Integer denp = den;
  if (p == 2) denp *= den;
  out.dist_pow_p = Rational(best_cost, denp);
  out.dist_pow_p.canonicalize();
  out.witness.reserve(n);
  for (auto& y : best_witness) out.witness.emplace_back(y);
  return out;
}

DistanceResult shortest_vector(const ModulusStructure& m, int p) {
  check_norm_index(p);
  const std::size_t n = m.dim();
  if (n == 0) throw InvalidInput("shortest_vector: zero-dimensional lattice has no nonzero vector");
  const std::int64_t d = m.d();
  auto power = [p](std::int64_t x) {
    const Integer a(static_cast<long>(x < 0 ? -x : x));
    return p == 1 ? a : Integer(a * a);
  };

  // The zero coset contributes its shortest nonzero members +-d e_j; the
  // lexicographically smallest of those is -d e_0.
  Integer best_cost = power(d);
  std::vector<Integer> best_witness(n, Integer(0));
  best_witness[0] = -d;

  std::vector<Integer> candidate(n);
  for (std::size_t c = 0; c < m.size(); ++c) {
    const auto v = m.rep(c);
    if (std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; })) continue;
    Integer sum(0);
    for (std::size_t i = 0; i < n; ++i) {
      // Shortest representative of v_i + dZ; at a tie pick the negative one.
      const std::int64_t y = (2 * v[i] >= d) ? v[i] - d : v[i];
      candidate[i] = static_cast<long>(y);
      sum += power(y);
    }
    if (sum < best_cost || (sum == best_cost && lex_less(candidate, best_witness))) {
      best_cost = sum;
      best_witness = candidate;
    }
  }

  DistanceResult out;
  out.p = p;
  out.dist_pow_p = Rational(best_cost);
  for (auto& y : best_witness) out.witness.emplace_back(y);
  return out;
}

SpanProjection project_to_span(const LatticeBasis& l, std::span<const Rational> t, int p) {
  check_norm_index(p);
  if (t.size() != l.dim()) throw InvalidInput("project_to_span: dimension mismatch");
  SpanProjection out;
  if (l.rank() == 0) {
    out.parallel.assign(l.dim(), Rational(0));
  } else if (l.full_rank()) {
    out.parallel.assign(t.begin(), t.end());
  } else {
    out.parallel = times_column(span_projector(l.basis()), t);
  }
  out.perp_pow_p = norm_pow(subtract(t, out.parallel), p);
  return out;
}

std::vector<std::size_t> support_of_complement(const LatticeBasis& l) {
  std::vector<std::size_t> out;
  if (l.full_rank()) return out;
  const RatMatrix u = orthogonal_complement_basis(l.basis());
  for (std::size_t j = 0; j < l.dim(); ++j) {
    for (std::size_t i = 0; i < u.rows(); ++i) {
      if (sgn(u(i, j)) != 0) {
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

}  // namespace lattest
