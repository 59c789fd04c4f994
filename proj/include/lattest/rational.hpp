#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lattest {

using Integer = mpz_class;
using Rational = mpq_class;  // canonical after every arithmetic op
using RatVector = std::vector<Rational>;
using IntVector = std::vector<std::int64_t>;

/// Parses "p/q", "-p", or "p" into a reduced rational. Throws InvalidInput on
/// malformed text or a zero denominator.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
/// Nearest integer with ties rounded away from zero.
Integer round_half_away(const Rational& q);
/// |q - round(q)|, the distance from q to the integers.
Rational frac_distance(const Rational& q);
/// Least non-negative residue of an integer modulo a positive modulus.
Integer mod_floor(const Integer& a, const Integer& modulus);
Rational abs_pow(const Rational& q, int p);
Integer lcm_of_denominators(std::span<const Rational> values);

RatVector make_vector(std::initializer_list<long> values);
RatVector to_rational(std::span<const std::int64_t> values);
Rational dot(std::span<const Rational> a, std::span<const Rational> b);
RatVector add(std::span<const Rational> a, std::span<const Rational> b);
RatVector subtract(std::span<const Rational> a, std::span<const Rational> b);
RatVector scale(const Rational& s, std::span<const Rational> v);
/// Sum over coordinates of |v_i|^p, i.e. ||v||_p^p.
Rational norm_pow(std::span<const Rational> v, int p);
bool all_integral(std::span<const Rational> v);

/// Dense row-major rational matrix. Rows are the vectors of a basis throughout
/// the library (a lattice is the integer row span).
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);
  static RatMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Rational> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  RatVector row_vector(std::size_t i) const;
  RatVector column(std::size_t j) const;
  std::vector<RatVector> row_vectors() const;

  RatMatrix transpose() const;
  RatMatrix select_columns(std::span<const std::size_t> columns) const;
  void append_row(std::span<const Rational> values);
  bool is_integral() const;

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// x^T A, a row vector times a matrix.
RatVector row_times(std::span<const Rational> x, const RatMatrix& a);
/// A x for a column vector x.
RatVector times_column(const RatMatrix& a, std::span<const Rational> x);

}  // namespace lattest
