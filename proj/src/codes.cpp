#include "lattest/codes.hpp"

#include <algorithm>
#include <cmath>

#include "lattest/errors.hpp"

namespace lattest {

namespace {

void check_bits(const BitVector& w, std::size_t n) {
  if (w.size() != n) throw InvalidInput("bit vector length mismatch");
  for (auto b : w) {
    if (b > 1) throw InvalidInput("bit vector entries must be 0 or 1");
  }
}

void xor_into(BitVector& a, const BitVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

// Reduces `w` against an echelon basis; the result is zero iff w is in the span.
BitVector reduce(BitVector w, const std::vector<BitVector>& echelon, const std::vector<std::size_t>& pivots) {
  for (std::size_t r = 0; r < echelon.size(); ++r) {
    if (w[pivots[r]]) xor_into(w, echelon[r]);
  }
  return w;
}

bool is_zero(const BitVector& w) {
  return std::all_of(w.begin(), w.end(), [](std::uint8_t b) { return b == 0; });
}

std::size_t first_one(const BitVector& w) {
  return static_cast<std::size_t>(std::find(w.begin(), w.end(), 1) - w.begin());
}

// Rows of `rows` form an F_2 basis when they stay nonzero after reduction
// against the previously accepted rows.
void echelonize(const std::vector<BitVector>& rows, std::vector<BitVector>& echelon,
                std::vector<std::size_t>& pivots, std::vector<BitVector>* kept) {
  for (const auto& row : rows) {
    BitVector r = reduce(row, echelon, pivots);
    if (is_zero(r)) continue;
    const std::size_t p = first_one(r);
    // Keep the echelon fully reduced so reduce() can run in one pass.
    for (auto& e : echelon) {
      if (e[p]) xor_into(e, r);
    }
    echelon.push_back(std::move(r));
    pivots.push_back(p);
    if (kept) kept->push_back(row);
  }
}

}  // namespace

BinaryLinearCode::BinaryLinearCode(std::size_t n, std::vector<BitVector> generator)
    : n_(n), generator_(std::move(generator)) {
  for (const auto& g : generator_) check_bits(g, n_);
  echelonize(generator_, echelon_, pivots_, nullptr);
  if (echelon_.size() != generator_.size()) throw InvalidInput("generator rows are dependent over F_2");
}

BinaryLinearCode BinaryLinearCode::from_spanning_set(std::size_t n, const std::vector<BitVector>& rows) {
  for (const auto& g : rows) check_bits(g, n);
  std::vector<BitVector> echelon, kept;
  std::vector<std::size_t> pivots;
  echelonize(rows, echelon, pivots, &kept);
  return BinaryLinearCode(n, std::move(kept));
}

BinaryLinearCode BinaryLinearCode::full(std::size_t n) {
  std::vector<BitVector> rows(n, BitVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1;
  return BinaryLinearCode(n, std::move(rows));
}

BinaryLinearCode BinaryLinearCode::zero(std::size_t n) { return BinaryLinearCode(n, {}); }

bool BinaryLinearCode::contains(const BitVector& w) const {
  check_bits(w, n_);
  return is_zero(reduce(w, echelon_, pivots_));
}

std::vector<BitVector> BinaryLinearCode::codewords(std::size_t cap) const {
  if (k() >= 63 || (std::size_t{1} << k()) > cap) throw ResourceLimit("codeword enumeration exceeds cap");
  const std::size_t count = std::size_t{1} << k();
  std::vector<BitVector> out;
  out.reserve(count);
  BitVector current(n_, 0);
  out.push_back(current);
  for (std::size_t i = 1; i < count; ++i) {
    // Gray code: step i flips the generator at the lowest set bit of i.
    xor_into(current, generator_[static_cast<std::size_t>(__builtin_ctzll(i))]);
    out.push_back(current);
  }
  return out;
}

ReedMullerCode rm_code(int k, int r) {
  if (r < 0 || r > 20) throw InvalidInput("rm_code: r must lie in [0, 20]");
  if (k < 0 || k > r) throw InvalidInput("rm_code: need 0 <= k <= r");
  const std::size_t n = std::size_t{1} << r;
  std::vector<BitVector> rows;
  // Graded-lex order: by degree, then lexicographically by variable set.
  for (int deg = 0; deg <= k; ++deg) {
    std::vector<int> vars(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) vars[static_cast<std::size_t>(i)] = i;
    while (true) {
      BitVector row(n, 0);
      for (std::size_t j = 0; j < n; ++j) {
        bool value = true;
        for (int v : vars) value = value && ((j >> (r - 1 - v)) & 1U);
        row[j] = value ? 1 : 0;
      }
      rows.push_back(std::move(row));
      // Next combination of `deg` variables out of r.
      int i = deg - 1;
      while (i >= 0 && vars[static_cast<std::size_t>(i)] == r - deg + i) --i;
      if (i < 0) break;
      ++vars[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < deg; ++j) vars[static_cast<std::size_t>(j)] = vars[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return ReedMullerCode{k, r, BinaryLinearCode(n, std::move(rows))};
}

HammingResult hamming_distance_oracle(const BinaryLinearCode& c, const BitVector& w, std::size_t cap) {
  check_bits(w, c.n());
  const auto words = c.codewords(cap);
  HammingResult best{c.n() + 1, {}};
  for (const auto& cw : words) {
    const std::size_t dist = hamming_distance(cw, w);
    if (dist < best.dist || (dist == best.dist && cw < best.witness)) best = {dist, cw};
  }
  return best;
}

bool schur_condition(const std::vector<BinaryLinearCode>& family) {
  if (family.empty()) return true;
  const std::size_t n = family.front().n();
  for (const auto& c : family) {
    if (c.n() != n) throw InvalidInput("schur_condition: codes have different lengths");
  }
  for (std::size_t i = 0; i + 1 < family.size(); ++i) {
    const auto& gens = family[i].generator();
    const auto& next = family[i + 1];
    for (const auto& g : gens) {
      if (!next.contains(g)) return false;
    }
    for (std::size_t a = 0; a < gens.size(); ++a) {
      for (std::size_t b = a + 1; b < gens.size(); ++b) {
        if (!next.contains(schur_product(gens[a], gens[b]))) return false;
      }
    }
  }
  return true;
}

BitVector schur_product(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InvalidInput("schur_product: length mismatch");
  BitVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

std::size_t hamming_weight(const BitVector& w) {
  return static_cast<std::size_t>(std::count(w.begin(), w.end(), 1));
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InvalidInput("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

BitVector xor_of(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InvalidInput("xor_of: length mismatch");
  BitVector out(a);
  xor_into(out, b);
  return out;
}

RatVector bits_to_rational(const BitVector& w) {
  RatVector out;
  out.reserve(w.size());
  for (auto b : w) out.emplace_back(b);
  return out;
}

std::uint8_t bit_value(const Rational& v) {
  if (v == 0) return 0;
  if (v == 1) return 1;
  throw InvalidInput("code tester read a non-bit value " + to_string(v));
}

CodeTesterSpec CodeTesterSpec::for_reed_muller(int k, const Rational& eps, const Rational& s, double c_rep) {
  if (sgn(eps) <= 0 || eps >= 1) throw InvalidInput("code tester epsilon must lie in (0, 1)");
  if (k < 0 || k > 30) throw InvalidInput("code tester degree out of range");
  const double inv = 1.0 / (std::ldexp(1.0, k) * eps.get_d());
  CodeTesterSpec spec;
  spec.epsilon = eps;
  spec.soundness = s;
  spec.repetitions = std::max<std::size_t>(1, repetitions_for(c_rep, std::max(1.0, inv), s));
  spec.queries_per_round = std::size_t{1} << (k + 1);
  return spec;
}

RmFlatTester::RmFlatTester(ReedMullerCode code, CodeTesterSpec spec) : code_(std::move(code)), spec_(std::move(spec)) {
  if (code_.degree >= code_.variables) throw InvalidInput("flat test needs degree k < r");
  if (spec_.queries_per_round != (std::size_t{1} << (code_.degree + 1))) {
    throw InvalidInput("flat test reads 2^{k+1} points per round");
  }
}

std::string RmFlatTester::name() const {
  return "rm-flat(" + std::to_string(code_.degree) + "," + std::to_string(code_.variables) + ")";
}

std::vector<std::size_t> RmFlatTester::sample_flat(Rng& rng) const {
  const int r = code_.variables;
  const int dims = code_.degree + 1;
  const std::uint64_t n = std::uint64_t{1} << r;
  std::vector<std::uint64_t> dirs;
  while (true) {
    dirs.clear();
    // pivot[b] holds a reduced vector whose highest set bit is b.
    std::vector<std::uint64_t> pivot(static_cast<std::size_t>(r), 0);
    bool independent = true;
    for (int i = 0; i < dims; ++i) {
      const std::uint64_t u = rng.below(n);
      dirs.push_back(u);
      std::uint64_t x = u;
      bool placed = false;
      for (int b = r - 1; b >= 0 && !placed; --b) {
        if (!((x >> b) & 1U)) continue;
        auto& slot = pivot[static_cast<std::size_t>(b)];
        if (slot == 0) {
          slot = x;
          placed = true;
        } else {
          x ^= slot;
        }
      }
      // Dependent draws still finish the attempt so each attempt consumes
      // the same number of values.
      if (!placed) independent = false;
    }
    if (independent) break;
  }
  const std::uint64_t base = rng.below(n);
  std::vector<std::size_t> points(std::size_t{1} << dims);
  for (std::size_t mask = 0; mask < points.size(); ++mask) {
    std::uint64_t p = base;
    for (int i = 0; i < dims; ++i) {
      if ((mask >> i) & 1U) p ^= dirs[static_cast<std::size_t>(i)];
    }
    points[mask] = static_cast<std::size_t>(p);
  }
  return points;
}

bool RmFlatTester::round_accepts(QueryAccess& input, Rng& rng) const {
  unsigned parity = 0;
  for (auto j : sample_flat(rng)) parity ^= bit_value(input.query(j));
  return parity == 0;
}

Verdict RmFlatTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != dim()) throw InvalidInput("flat test: input length mismatch");
  for (std::size_t i = 0; i < spec_.repetitions; ++i) {
    if (!round_accepts(input, rng)) return Verdict::kReject;
  }
  return Verdict::kAccept;
}

CodeTesterPtr make_rm_tester(int k, int r, const Rational& eps, const Rational& s, double c_rep) {
  if (k == r) return std::make_shared<FullCodeTester>(std::size_t{1} << r);
  return std::make_shared<RmFlatTester>(rm_code(k, r), CodeTesterSpec::for_reed_muller(k, eps, s, c_rep));
}

std::size_t majority_repetitions(const Rational& gamma) {
  std::size_t reps = std::max<std::size_t>(1, repetitions_for(kMajorityConstant, 1.0, gamma));
  if (reps % 2 == 0) ++reps;
  return reps;
}

TolerantCodeTester::TolerantCodeTester(CodeTesterPtr base, Rational eps1, Rational eps2, std::size_t repetitions)
    : base_(std::move(base)), eps1_(std::move(eps1)), eps2_(std::move(eps2)), repetitions_(repetitions) {
  if (!base_) throw InvalidInput("tolerant code tester needs a base tester");
  if (!base_->queries_uniform()) throw InvalidInput("base tester queries must be uniformly distributed");
  if (repetitions_ == 0 || repetitions_ % 2 == 0) throw InvalidInput("majority repetitions must be odd");
  if (sgn(eps1_) < 0 || eps2_ <= eps1_) throw InvalidInput("tolerant code tester needs 0 <= eps1 < eps2");
  const std::size_t q = base_->query_budget();
  if (q > 0 && eps1_ * 3 * static_cast<unsigned long>(q) > 1) {
    throw InvalidInput("eps1 exceeds 1/(3q) for the base tester's query count " + std::to_string(q));
  }
  if (eps2_ < base_->epsilon()) throw InvalidInput("eps2 is below the base tester's epsilon");
}

TolerantCodeTester TolerantCodeTester::with_confidence(CodeTesterPtr base, Rational eps1, Rational eps2,
                                                       const Rational& gamma) {
  return TolerantCodeTester(std::move(base), std::move(eps1), std::move(eps2), majority_repetitions(gamma));
}

std::string TolerantCodeTester::name() const { return "tolerant[" + base_->name() + "]"; }

Verdict TolerantCodeTester::run(QueryAccess& input, Rng& rng) const {
  std::size_t accepts = 0;
  for (std::size_t i = 0; i < repetitions_; ++i) {
    Rng child = rng.split(i);
    if (base_->run(input, child) == Verdict::kAccept) ++accepts;
    // Stop once the majority is decided either way.
    if (2 * accepts > repetitions_) return Verdict::kAccept;
    if (2 * (i + 1 - accepts) > repetitions_) return Verdict::kReject;
  }
  return verdict_of(2 * accepts > repetitions_);
}

}  // namespace lattest
