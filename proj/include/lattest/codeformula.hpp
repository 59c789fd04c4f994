#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "lattest/codes.hpp"
#include "lattest/lattice.hpp"
#include "lattest/query.hpp"
#include "lattest/testers.hpp"

namespace lattest {

/// C_0 + 2 C_1 + ... + 2^{m-1} C_{m-1} + 2^m Z^n for a nested family with
/// the Schur product property.
class CodeFormulaLattice {
 public:
  /// Throws NotALattice when the family fails the Schur product condition
  /// and InvalidInput for an empty family.
  static CodeFormulaLattice build(std::vector<BinaryLinearCode> family);
  /// Family RM(degrees[0], r), ..., RM(degrees[m-1], r).
  static CodeFormulaLattice reed_muller(std::vector<int> degrees, int r);

  const std::vector<BinaryLinearCode>& family() const { return family_; }
  std::size_t height() const { return family_.size(); }
  std::size_t n() const { return basis_.dim(); }
  const LatticeBasis& basis() const { return basis_; }
  /// RM degrees per level when built by reed_muller(), empty otherwise.
  const std::vector<int>& rm_degrees() const { return rm_degrees_; }
  int rm_variables() const { return rm_variables_; }

 private:
  CodeFormulaLattice(std::vector<BinaryLinearCode> family, LatticeBasis basis);

  std::vector<BinaryLinearCode> family_;
  LatticeBasis basis_;
  std::vector<int> rm_degrees_;
  int rm_variables_ = -1;
};

struct BitDecomposition {
  std::vector<BitVector> planes;  // w_0, ..., w_{m-1}
  RatVector residual;             // t_m = (t - sum 2^i w_i) / 2^m
};

/// Rounds each coordinate (half away from zero), reduces it into
/// {0, ..., 2^m - 1} and splits it into bits; the residual keeps the rest.
BitDecomposition bit_decompose(std::span<const Rational> t, std::size_t m);

/// Bit `level` of round(value) mod 2^m.
std::uint8_t plane_bit(const Rational& value, std::size_t level, std::size_t m);

/// Builds a code tester at (eps, s) for one level of a code-formula lattice.
using CodeTesterFactory = std::function<CodeTesterPtr(const Rational& eps, const Rational& s)>;

class CodeTesterRegistry {
 public:
  void set(std::size_t level, CodeTesterFactory factory) { factories_[level] = std::move(factory); }
  bool has(std::size_t level) const { return factories_.count(level) != 0; }
  /// ConfigError when no tester is registered for `level`.
  const CodeTesterFactory& get(std::size_t level) const;

  /// Flat testers for every level of a Reed-Muller code-formula lattice.
  static CodeTesterRegistry for_reed_muller(const CodeFormulaLattice& l,
                                            double c_rep = kDefaultRepetitionConstant);

 private:
  std::map<std::size_t, CodeTesterFactory> factories_;
};

/// 1-sided l1-tester for a code-formula lattice: the Z^n tester at eps/2,
/// then T_i(eps/(m 2^{i+1}), s) on bit plane i of the input, computed per
/// read. A non-integral read in the second stage rejects at once.
class CodeFormulaTester final : public Tester {
 public:
  CodeFormulaTester(const CodeFormulaLattice& l, const CodeTesterRegistry& registry, Rational eps, Rational s,
                    double c_z = kIntegerTesterConstant);

  std::string name() const override { return "code-formula"; }
  std::size_t dim() const override { return n_; }
  std::size_t query_budget() const override;
  Verdict run(QueryAccess& input, Rng& rng) const override;

  const IntegerLatticeTester& integer_stage() const { return integer_stage_; }
  const std::vector<CodeTesterPtr>& code_stages() const { return code_stages_; }
  const Rational& eps() const { return eps_; }
  const Rational& s() const { return s_; }

 private:
  std::size_t n_;
  std::size_t m_;
  Rational eps_;
  Rational s_;
  IntegerLatticeTester integer_stage_;
  std::vector<CodeTesterPtr> code_stages_;
};

struct SandwichTriple {
  Rational lower;    // d_H(t, C_k)
  Rational lattice;  // d_1(2^k t, L)
  Rational upper;    // 2^k d_H(t, C_k)
  bool holds() const { return lower <= lattice && lattice <= upper; }
};

SandwichTriple distance_sandwich_check(const CodeFormulaLattice& l, const ModulusStructure& m, std::size_t k,
                                       const BitVector& t);

/// Code tester for C_k that runs a lattice tester on 2^k w.
class ScaledCodeTester final : public Tester {
 public:
  ScaledCodeTester(TesterPtr lattice_tester, std::size_t k);
  std::string name() const override { return "scaled[" + inner_->name() + "]"; }
  std::size_t dim() const override { return inner_->dim(); }
  std::size_t query_budget() const override { return inner_->query_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

 private:
  TesterPtr inner_;
  Integer scale_;
};

TesterPtr code_tester_from_lattice_tester(TesterPtr lattice_tester, std::size_t k);

/// Tolerant l1-tester for a code-formula lattice: the tolerant Z^n tester at
/// (eps1, eps2/2) plus tolerant code testers (2 eps1, eps2/(m 2^{i+1})) on the
/// bit planes of round(t), each at confidence min(c/(m+1), s).
class TolerantCodeFormulaTester final : public Tester {
 public:
  /// InvalidInput unless eps2 > m 2^{m+1} eps1; base code testers are built
  /// from `registry` at soundness 1/3.
  TolerantCodeFormulaTester(const CodeFormulaLattice& l, const CodeTesterRegistry& registry, Rational eps1,
                            Rational eps2, const Rational& c, const Rational& s,
                            double c_t = kTolerantTesterConstant);

  std::string name() const override { return "tolerant-code-formula"; }
  std::size_t dim() const override { return n_; }
  std::size_t query_budget() const override;
  Verdict run(QueryAccess& input, Rng& rng) const override;

  const TolerantIntegerTester& integer_stage() const { return integer_stage_; }
  const std::vector<std::shared_ptr<const TolerantCodeTester>>& code_stages() const { return code_stages_; }

 private:
  std::size_t n_;
  std::size_t m_;
  TolerantIntegerTester integer_stage_;
  std::vector<std::shared_ptr<const TolerantCodeTester>> code_stages_;
};

}  // namespace lattest
