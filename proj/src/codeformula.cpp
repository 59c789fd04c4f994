#include "lattest/codeformula.hpp"

#include "lattest/errors.hpp"

namespace lattest {

namespace {

Integer pow2(std::size_t e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return out;
}

TolerantIntegerTester tolerant_integer_stage(const CodeFormulaLattice& l, const Rational& eps1, const Rational& eps2,
                                             const Rational& c, const Rational& s, double c_t) {
  const auto m = static_cast<unsigned long>(l.height());
  if (eps2 <= Rational(pow2(m + 1)) * m * eps1) {
    throw InvalidInput("tolerant code-formula tester needs eps2 > m 2^{m+1} eps1");
  }
  return TolerantIntegerTester(l.n(), eps1, eps2 / 2, c / (m + 1), s, c_t);
}

}  // namespace

CodeFormulaLattice::CodeFormulaLattice(std::vector<BinaryLinearCode> family, LatticeBasis basis)
    : family_(std::move(family)), basis_(std::move(basis)) {}

CodeFormulaLattice CodeFormulaLattice::build(std::vector<BinaryLinearCode> family) {
  if (family.empty()) throw InvalidInput("code formula needs at least one code");
  if (!schur_condition(family)) throw NotALattice("code family violates the Schur product condition");
  const std::size_t n = family.front().n();
  const std::size_t m = family.size();
  std::vector<RatVector> rows;
  for (std::size_t i = 0; i < m; ++i) {
    const Integer scale = pow2(i);
    for (const auto& g : family[i].generator()) {
      RatVector row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = scale * g[j];
      rows.push_back(std::move(row));
    }
  }
  const Integer top = pow2(m);
  for (std::size_t j = 0; j < n; ++j) {
    RatVector row(n, Rational(0));
    row[j] = top;
    rows.push_back(std::move(row));
  }
  LatticeBasis basis = LatticeBasis::from_generators(RatMatrix::from_rows(rows, n));
  return CodeFormulaLattice(std::move(family), std::move(basis));
}

CodeFormulaLattice CodeFormulaLattice::reed_muller(std::vector<int> degrees, int r) {
  std::vector<BinaryLinearCode> family;
  for (int k : degrees) family.push_back(rm_code(k, r).code);
  CodeFormulaLattice out = build(std::move(family));
  out.rm_degrees_ = std::move(degrees);
  out.rm_variables_ = r;
  return out;
}

BitDecomposition bit_decompose(std::span<const Rational> t, std::size_t m) {
  const Integer modulus = pow2(m);
  BitDecomposition out;
  out.planes.assign(m, BitVector(t.size(), 0));
  out.residual.resize(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const Integer low = mod_floor(round_half_away(t[j]), modulus);
    for (std::size_t i = 0; i < m; ++i) out.planes[i][j] = mpz_tstbit(low.get_mpz_t(), i) ? 1 : 0;
    out.residual[j] = (t[j] - low) / modulus;
  }
  return out;
}

std::uint8_t plane_bit(const Rational& value, std::size_t level, std::size_t m) {
  const Integer low = mod_floor(round_half_away(value), pow2(m));
  return mpz_tstbit(low.get_mpz_t(), level) ? 1 : 0;
}

const CodeTesterFactory& CodeTesterRegistry::get(std::size_t level) const {
  const auto it = factories_.find(level);
  if (it == factories_.end()) throw ConfigError("no code tester registered for level " + std::to_string(level));
  return it->second;
}

CodeTesterRegistry CodeTesterRegistry::for_reed_muller(const CodeFormulaLattice& l, double c_rep) {
  if (l.rm_degrees().empty()) throw ConfigError("lattice was not built from Reed-Muller codes");
  CodeTesterRegistry reg;
  const int r = l.rm_variables();
  for (std::size_t i = 0; i < l.height(); ++i) {
    const int k = l.rm_degrees()[i];
    reg.set(i, [k, r, c_rep](const Rational& eps, const Rational& s) { return make_rm_tester(k, r, eps, s, c_rep); });
  }
  return reg;
}

CodeFormulaTester::CodeFormulaTester(const CodeFormulaLattice& l, const CodeTesterRegistry& registry, Rational eps,
                                     Rational s, double c_z)
    : n_(l.n()),
      m_(l.height()),
      eps_(std::move(eps)),
      s_(std::move(s)),
      integer_stage_(n_, eps_ / 2, s_, 1, c_z) {
  for (std::size_t i = 0; i < m_; ++i) {
    const Rational eps_i = eps_ / (Rational(pow2(i + 1)) * static_cast<unsigned long>(m_));
    CodeTesterPtr t = registry.get(i)(eps_i, s_);
    if (!t || t->dim() != n_) throw ConfigError("code tester for level " + std::to_string(i) + " has wrong length");
    code_stages_.push_back(std::move(t));
  }
}

std::size_t CodeFormulaTester::query_budget() const {
  std::size_t q = integer_stage_.query_budget();
  for (const auto& t : code_stages_) q += t->query_budget();
  return q;
}

Verdict CodeFormulaTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != n_) throw InvalidInput("code-formula tester: input dimension mismatch");
  Rng stage_rng = rng.split(0);
  if (integer_stage_.run(input, stage_rng) == Verdict::kReject) return Verdict::kReject;
  const std::size_t m = m_;
  try {
    for (std::size_t i = 0; i < m_; ++i) {
      QueryAccess plane = derive(input, [i, m](std::size_t, const Rational& v) {
        if (!is_integer(v)) throw ImmediateReject{};
        return Rational(plane_bit(v, i, m));
      });
      Rng code_rng = rng.split(i + 1);
      if (code_stages_[i]->run(plane, code_rng) == Verdict::kReject) return Verdict::kReject;
    }
  } catch (const ImmediateReject&) {
    return Verdict::kReject;
  }
  return Verdict::kAccept;
}

SandwichTriple distance_sandwich_check(const CodeFormulaLattice& l, const ModulusStructure& m, std::size_t k,
                                       const BitVector& t) {
  if (k >= l.height()) throw InvalidInput("sandwich: code index out of range");
  const HammingResult h = hamming_distance_oracle(l.family()[k], t);
  const Integer scale = pow2(k);
  RatVector scaled(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) scaled[j] = scale * t[j];
  SandwichTriple out;
  out.lower = static_cast<unsigned long>(h.dist);
  out.lattice = distance_oracle(m, scaled, 1).dist_pow_p;
  out.upper = out.lower * scale;
  return out;
}

ScaledCodeTester::ScaledCodeTester(TesterPtr lattice_tester, std::size_t k)
    : inner_(std::move(lattice_tester)), scale_(pow2(k)) {
  if (!inner_) throw InvalidInput("scaled code tester needs a lattice tester");
}

Verdict ScaledCodeTester::run(QueryAccess& input, Rng& rng) const {
  const Integer scale = scale_;
  QueryAccess scaled = derive(input, [scale](std::size_t, const Rational& v) { return Rational(scale * bit_value(v)); });
  return inner_->run(scaled, rng);
}

TesterPtr code_tester_from_lattice_tester(TesterPtr lattice_tester, std::size_t k) {
  return std::make_shared<ScaledCodeTester>(std::move(lattice_tester), k);
}

TolerantCodeFormulaTester::TolerantCodeFormulaTester(const CodeFormulaLattice& l, const CodeTesterRegistry& registry,
                                                     Rational eps1, Rational eps2, const Rational& c,
                                                     const Rational& s, double c_t)
    : n_(l.n()),
      m_(l.height()),
      integer_stage_(tolerant_integer_stage(l, eps1, eps2, c, s, c_t)) {
  const Rational c_part = c / static_cast<unsigned long>(m_ + 1);
  const Rational gamma = std::min(c_part, s);
  for (std::size_t i = 0; i < m_; ++i) {
    const Rational eps2_i = eps2 / (Rational(pow2(i + 1)) * static_cast<unsigned long>(m_));
    CodeTesterPtr base = registry.get(i)(eps2_i, Rational(1, 3));
    code_stages_.push_back(std::make_shared<const TolerantCodeTester>(
        TolerantCodeTester::with_confidence(std::move(base), 2 * eps1, eps2_i, gamma)));
  }
}

std::size_t TolerantCodeFormulaTester::query_budget() const {
  std::size_t q = integer_stage_.query_budget();
  for (const auto& t : code_stages_) q += t->query_budget();
  return q;
}

Verdict TolerantCodeFormulaTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != n_) throw InvalidInput("tolerant code-formula tester: input dimension mismatch");
  Rng stage_rng = rng.split(0);
  if (integer_stage_.run(input, stage_rng) == Verdict::kReject) return Verdict::kReject;
  const std::size_t m = m_;
  for (std::size_t i = 0; i < m_; ++i) {
    QueryAccess plane =
        derive(input, [i, m](std::size_t, const Rational& v) { return Rational(plane_bit(v, i, m)); });
    Rng code_rng = rng.split(i + 1);
    if (code_stages_[i]->run(plane, code_rng) == Verdict::kReject) return Verdict::kReject;
  }
  return Verdict::kAccept;
}

}  // namespace lattest
