#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lattest/query.hpp"
#include "lattest/rational.hpp"

namespace lattest {

using BitVector = std::vector<std::uint8_t>;

inline constexpr std::size_t kDefaultCodewordCap = std::size_t{1} << 20;

/// Linear code over F_2 given by generator rows independent over F_2.
class BinaryLinearCode {
 public:
  /// Throws InvalidInput on length mismatch, non-bit entries or dependent rows.
  BinaryLinearCode(std::size_t n, std::vector<BitVector> generator);
  /// Code spanned by arbitrary rows (dependent rows are dropped).
  static BinaryLinearCode from_spanning_set(std::size_t n, const std::vector<BitVector>& rows);
  static BinaryLinearCode full(std::size_t n);
  static BinaryLinearCode zero(std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t k() const { return generator_.size(); }
  const std::vector<BitVector>& generator() const { return generator_; }

  bool contains(const BitVector& w) const;
  bool is_full() const { return k() == n_; }
  /// Every codeword, in Gray-code order. ResourceLimit when 2^k > cap.
  std::vector<BitVector> codewords(std::size_t cap = kDefaultCodewordCap) const;

 private:
  std::size_t n_;
  std::vector<BitVector> generator_;
  std::vector<BitVector> echelon_;
  std::vector<std::size_t> pivots_;
};

struct ReedMullerCode {
  int degree;
  int variables;
  BinaryLinearCode code;
};

/// RM(k, r): evaluation tables of all monomials of degree <= k, listed in
/// graded-lexicographic order. Point j of F_2^r has x_1 as its most
/// significant bit.
ReedMullerCode rm_code(int k, int r);

struct HammingResult {
  std::size_t dist;
  BitVector witness;  // lexicographically smallest closest codeword
};

HammingResult hamming_distance_oracle(const BinaryLinearCode& c, const BitVector& w,
                                      std::size_t cap = kDefaultCodewordCap);

/// Nested C_0 ⊆ C_1 ⊆ ... and Schur products of C_i's generators inside C_{i+1}.
bool schur_condition(const std::vector<BinaryLinearCode>& family);

BitVector schur_product(const BitVector& a, const BitVector& b);
std::size_t hamming_weight(const BitVector& w);
std::size_t hamming_distance(const BitVector& a, const BitVector& b);
BitVector xor_of(const BitVector& a, const BitVector& b);
RatVector bits_to_rational(const BitVector& w);
/// Reads a coordinate that must be 0 or 1; InvalidInput otherwise.
std::uint8_t bit_value(const Rational& v);

inline constexpr double kDefaultRepetitionConstant = 8.0;

struct CodeTesterSpec {
  Rational epsilon;
  Rational soundness;
  std::size_t repetitions = 1;
  std::size_t queries_per_round = 1;

  std::size_t total_budget() const { return repetitions * queries_per_round; }

  /// repetitions = ceil(C_rep * ln(1/s) * max(1, 1/(2^k eps))), 2^{k+1} queries per round.
  static CodeTesterSpec for_reed_muller(int k, const Rational& eps, const Rational& s,
                                        double c_rep = kDefaultRepetitionConstant);
};

/// A 1-sided code tester; queries_uniform() reports whether each individual
/// query is marginally uniform over [n].
class CodeTester : public Tester {
 public:
  virtual bool queries_uniform() const = 0;
  virtual Rational epsilon() const = 0;
};

using CodeTesterPtr = std::shared_ptr<const CodeTester>;

/// (k+1)-flat parity test for RM(k, r), k < r.
class RmFlatTester final : public CodeTester {
 public:
  RmFlatTester(ReedMullerCode code, CodeTesterSpec spec);

  std::string name() const override;
  std::size_t dim() const override { return code_.code.n(); }
  std::size_t query_budget() const override { return spec_.total_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;
  bool queries_uniform() const override { return true; }
  Rational epsilon() const override { return spec_.epsilon; }

  /// A uniformly random affine (k+1)-flat, as its 2^{k+1} point indices.
  std::vector<std::size_t> sample_flat(Rng& rng) const;
  /// One round: query a random flat, accept iff the parity is even.
  bool round_accepts(QueryAccess& input, Rng& rng) const;

  const CodeTesterSpec& spec() const { return spec_; }
  const ReedMullerCode& code() const { return code_; }

 private:
  ReedMullerCode code_;
  CodeTesterSpec spec_;
};

/// Tester for the whole space F_2^n: accepts without reading anything.
class FullCodeTester final : public CodeTester {
 public:
  explicit FullCodeTester(std::size_t n) : n_(n) {}
  std::string name() const override { return "full-code"; }
  std::size_t dim() const override { return n_; }
  std::size_t query_budget() const override { return 0; }
  Verdict run(QueryAccess&, Rng&) const override { return Verdict::kAccept; }
  bool queries_uniform() const override { return true; }
  Rational epsilon() const override { return Rational(0); }

 private:
  std::size_t n_;
};

/// Tester for RM(k, r) at (eps, s); the trivial tester when k = r.
CodeTesterPtr make_rm_tester(int k, int r, const Rational& eps, const Rational& s,
                             double c_rep = kDefaultRepetitionConstant);

inline constexpr double kMajorityConstant = 18.0;

/// Odd majority repetition count ceil(18 ln(1/gamma)), at least 1.
std::size_t majority_repetitions(const Rational& gamma);

/// Tolerant code tester from a 1-sided base with uniform queries: runs the
/// base R times independently and takes the majority verdict.
class TolerantCodeTester final : public Tester {
 public:
  /// Throws InvalidInput unless the base queries are uniform,
  /// eps1 <= 1/(3 q_base) and eps2 >= the base tester's epsilon.
  TolerantCodeTester(CodeTesterPtr base, Rational eps1, Rational eps2, std::size_t repetitions);
  static TolerantCodeTester with_confidence(CodeTesterPtr base, Rational eps1, Rational eps2,
                                            const Rational& gamma);

  std::string name() const override;
  std::size_t dim() const override { return base_->dim(); }
  std::size_t query_budget() const override { return repetitions_ * base_->query_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

  std::size_t repetitions() const { return repetitions_; }
  const Rational& eps1() const { return eps1_; }
  const Rational& eps2() const { return eps2_; }

 private:
  CodeTesterPtr base_;
  Rational eps1_;
  Rational eps2_;
  std::size_t repetitions_;
};

}  // namespace lattest
