#include "lattest/rational.hpp"

#include <algorithm>
#include <cctype>

#include "lattest/errors.hpp"

namespace lattest {

namespace {

bool valid_integer_text(std::string_view text) {
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

Integer parse_integer(std::string_view text) {
  if (!valid_integer_text(text)) {
    throw InvalidInput("malformed integer '" + std::string(text) + "'");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return Integer(std::string(text), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer round_half_away(const Rational& q) {
  const Rational half(1, 2);
  if (sgn(q) >= 0) return floor_of(q + half);
  return -floor_of(-q + half);
}

Rational frac_distance(const Rational& q) { return abs(q - Rational(round_half_away(q))); }

Integer mod_floor(const Integer& a, const Integer& modulus) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

Rational abs_pow(const Rational& q, int p) {
  const Rational a = abs(q);
  Rational out(1);
  for (int i = 0; i < p; ++i) out *= a;
  return out;
}

Integer lcm_of_denominators(std::span<const Rational> values) {
  Integer l(1);
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

RatVector make_vector(std::initializer_list<long> values) {
  RatVector out;
  out.reserve(values.size());
  for (long v : values) out.emplace_back(v);
  return out;
}

RatVector to_rational(std::span<const std::int64_t> values) {
  RatVector out;
  out.reserve(values.size());
  for (auto v : values) out.emplace_back(static_cast<long>(v));
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVector add(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw InvalidInput("add: dimension mismatch");
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVector subtract(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw InvalidInput("subtract: dimension mismatch");
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RatVector scale(const Rational& s, std::span<const Rational> v) {
  RatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

Rational norm_pow(std::span<const Rational> v, int p) {
  Rational s(0);
  for (const auto& x : v) s += abs_pow(x, p);
  return s;
}

bool all_integral(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return is_integer(q); });
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InvalidInput("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

RatMatrix RatMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  RatMatrix m(rows.size(), cols);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidInput("ragged matrix rows");
    std::size_t j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatVector RatMatrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

RatVector RatMatrix::column(std::size_t j) const {
  RatVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<RatVector> RatMatrix::row_vectors() const {
  std::vector<RatVector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i));
  return out;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::select_columns(std::span<const std::size_t> columns) const {
  RatMatrix out(rows_, columns.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j] >= cols_) throw InvalidInput("column index out of range");
      out(i, j) = (*this)(i, columns[j]);
    }
  }
  return out;
}

void RatMatrix::append_row(std::span<const Rational> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw InvalidInput("append_row: dimension mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

bool RatMatrix::is_integral() const { return all_integral(data_); }

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix product: dimension mismatch");
  RatMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

RatVector row_times(std::span<const Rational> x, const RatMatrix& a) {
  if (x.size() != a.rows()) throw InvalidInput("row_times: dimension mismatch");
  RatVector out(a.cols(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += x[i] * a(i, j);
  }
  return out;
}

RatVector times_column(const RatMatrix& a, std::span<const Rational> x) {
  if (x.size() != a.cols()) throw InvalidInput("times_column: dimension mismatch");
  RatVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

}  // namespace lattest
