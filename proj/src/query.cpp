#include "lattest/query.hpp"

#include <algorithm>
#include <cmath>

#include "lattest/errors.hpp"

namespace lattest {

QueryAccess::QueryAccess(std::size_t dim, Source source) : dim_(dim), source_(std::move(source)) {}

QueryAccess QueryAccess::over(RatVector values) {
  auto shared = std::make_shared<const RatVector>(std::move(values));
  const std::size_t n = shared->size();
  return QueryAccess(n, [shared](std::size_t i) { return (*shared)[i]; });
}

Rational QueryAccess::query(std::size_t index) {
  if (index >= dim_) throw InvalidInput("query index out of range");
  Rational value = source_(index);
  transcript_.push_back({index, value});
  return value;
}

std::vector<std::size_t> QueryAccess::queried_indices() const {
  std::vector<std::size_t> out;
  out.reserve(transcript_.size());
  for (const auto& q : transcript_) out.push_back(q.index);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QueryAccess derive(QueryAccess& parent, std::function<Rational(std::size_t, const Rational&)> map) {
  QueryAccess* p = &parent;
  return QueryAccess(parent.dim(), [p, map = std::move(map)](std::size_t i) { return map(i, p->query(i)); });
}

TestOutcome execute(const Tester& tester, QueryAccess& input, Rng& rng) {
  TestOutcome out;
  out.seed = rng.record();
  const std::size_t before = input.count();
  out.verdict = tester.run(input, rng);
  const auto& t = input.transcript();
  out.transcript.assign(t.begin() + static_cast<std::ptrdiff_t>(before), t.end());
  out.query_count = out.transcript.size();
  return out;
}

TestOutcome execute(const Tester& tester, const RatVector& input, Rng& rng) {
  if (input.size() != tester.dim()) throw InvalidInput("input dimension does not match tester");
  QueryAccess access = QueryAccess::over(input);
  return execute(tester, access, rng);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, Rng& rng) {
  if (n == 0 && count > 0) throw InvalidInput("cannot sample coordinates of an empty vector");
  std::vector<std::size_t> out(count);
  for (auto& i : out) i = static_cast<std::size_t>(rng.below(n));
  return out;
}

std::size_t repetitions_for(double c, double x, const Rational& s) {
  if (sgn(s) <= 0 || s > 1) throw InvalidInput("error probability must lie in (0, 1]");
  const double reps = std::ceil(c * x * std::log(1.0 / s.get_d()) - 1e-9);
  return reps <= 0 ? 0 : static_cast<std::size_t>(reps);
}

}  // namespace lattest
