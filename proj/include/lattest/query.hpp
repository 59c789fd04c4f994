#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lattest/rational.hpp"
#include "lattest/rng.hpp"

namespace lattest {

struct Query {
  std::size_t index;
  Rational value;
};

enum class Verdict { kReject, kAccept };

inline Verdict verdict_of(bool accept) { return accept ? Verdict::kAccept : Verdict::kReject; }

/// Metered oracle access to an input vector. Every read goes through query(),
/// which appends exactly one transcript entry; testers never see the vector
/// itself.
class QueryAccess {
 public:
  using Source = std::function<Rational(std::size_t)>;

  QueryAccess(std::size_t dim, Source source);
  QueryAccess(const QueryAccess&) = delete;
  QueryAccess& operator=(const QueryAccess&) = delete;
  QueryAccess(QueryAccess&&) = default;
  QueryAccess& operator=(QueryAccess&&) = default;

  static QueryAccess over(RatVector values);

  Rational query(std::size_t index);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return transcript_.size(); }
  const std::vector<Query>& transcript() const { return transcript_; }
  /// Distinct queried coordinates in increasing order.
  std::vector<std::size_t> queried_indices() const;

 private:
  std::size_t dim_;
  Source source_;
  std::vector<Query> transcript_;
};

/// An access whose reads each cost exactly one read of `parent`, with the
/// answer passed through `map(index, parent_value)`. The parent must outlive
/// the derived access.
QueryAccess derive(QueryAccess& parent, std::function<Rational(std::size_t, const Rational&)> map);

/// Thrown by derived accesses to abort a composite tester with a rejection
/// as soon as a read proves the input cannot be accepted (for example a
/// non-integral coordinate seen by a stage that only handles integers).
struct ImmediateReject {};

class Tester {
 public:
  virtual ~Tester() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  /// Upper bound on the reads any single run performs.
  virtual std::size_t query_budget() const = 0;
  virtual Verdict run(QueryAccess& input, Rng& rng) const = 0;
};

using TesterPtr = std::shared_ptr<const Tester>;

struct TestOutcome {
  Verdict verdict = Verdict::kReject;
  std::vector<Query> transcript;
  std::size_t query_count = 0;
  SeedRecord seed;

  bool accepted() const { return verdict == Verdict::kAccept; }
};

/// Runs `tester` once on a fresh access and packages the transcript. The seed
/// record is captured before the run, so (seed, transcript) replays it.
TestOutcome execute(const Tester& tester, QueryAccess& input, Rng& rng);
TestOutcome execute(const Tester& tester, const RatVector& input, Rng& rng);

/// Samples `count` coordinates uniformly with replacement.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, Rng& rng);

/// ceil(c * x * ln(1/s)); the shared shape of every repetition count here.
std::size_t repetitions_for(double c, double x, const Rational& s);

}  // namespace lattest
