#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lattest/errors.hpp"
#include "lattest/query.hpp"
#include "lattest/rng.hpp"

using namespace lattest;

TEST(Rng, SameSeedAndStreamReplay) {
  Rng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_EQ(a.counter(), 100u);
}

TEST(Rng, StreamsAndSplitsDiffer) {
  Rng a(42, 7), b(42, 8);
  const Rng c = Rng(42, 7).split(1), d = Rng(42, 7).split(2);
  Rng c2 = c, d2 = d;
  int same_ab = 0, same_cd = 0;
  for (int i = 0; i < 64; ++i) {
    same_ab += a() == b();
    same_cd += c2() == d2();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_cd, 0);
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(1, 2);
  const auto before = a.counter();
  (void)a.split(5);
  EXPECT_EQ(a.counter(), before);
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  Rng r(3);
  std::vector<int> counts(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.below(6);
    ASSERT_LT(v, 6u);
    ++counts[v];
  }
  // 6 sigma band around n/6 for each bucket.
  const double sd = std::sqrt(n * (1.0 / 6) * (5.0 / 6));
  for (int c : counts) EXPECT_NEAR(c, n / 6.0, 6 * sd);
}

TEST(Rng, Uniform01InUnitInterval) {
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(TrialStream, DistinctAcrossGrid) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 20; ++c)
    for (std::uint64_t t = 0; t < 500; ++t) seen.insert(trial_stream(c, t));
  EXPECT_EQ(seen.size(), 20u * 500u);
}

TEST(QueryAccess, MetersEveryRead) {
  QueryAccess a = QueryAccess::over(make_vector({5, 6, 7}));
  EXPECT_EQ(a.query(2), 7);
  EXPECT_EQ(a.query(0), 5);
  EXPECT_EQ(a.query(2), 7);
  EXPECT_EQ(a.count(), 3u);
  EXPECT_EQ(a.queried_indices(), (std::vector<std::size_t>{0, 2}));
  EXPECT_THROW(a.query(3), InvalidInput);
}

TEST(QueryAccess, DerivedReadsCostOneParentRead) {
  QueryAccess parent = QueryAccess::over(make_vector({1, 2, 3}));
  QueryAccess child = derive(parent, [](std::size_t, const Rational& v) { return Rational(v * 10); });
  EXPECT_EQ(child.query(1), 20);
  EXPECT_EQ(child.query(1), 20);
  EXPECT_EQ(parent.count(), 2u);
  EXPECT_EQ(child.count(), 2u);
}

namespace {

class ReadTwo final : public Tester {
 public:
  std::string name() const override { return "read-two"; }
  std::size_t dim() const override { return 4; }
  std::size_t query_budget() const override { return 2; }
  Verdict run(QueryAccess& in, Rng& rng) const override {
    const auto i = rng.below(4);
    return verdict_of(in.query(i) == 0 && in.query((i + 1) % 4) == 0);
  }
};

}  // namespace

TEST(Execute, PackagesTranscriptAndSeed) {
  ReadTwo t;
  Rng rng(11, 3);
  const TestOutcome o = execute(t, make_vector({0, 0, 0, 0}), rng);
  EXPECT_TRUE(o.accepted());
  EXPECT_EQ(o.query_count, 2u);
  EXPECT_EQ(o.transcript.size(), 2u);
  EXPECT_EQ(o.seed.seed, 11u);
  EXPECT_EQ(o.seed.stream, 3u);
  // Replaying the recorded seed reproduces the transcript.
  Rng replay(o.seed.seed, o.seed.stream);
  const TestOutcome again = execute(t, make_vector({0, 0, 0, 0}), replay);
  EXPECT_EQ(again.transcript.front().index, o.transcript.front().index);
}

TEST(Repetitions, CeilingOfNaturalLog) {
  // ceil(2 * 4 * ln 3) = ceil(8.789) = 9
  EXPECT_EQ(repetitions_for(2.0, 4.0, Rational(1, 3)), 9u);
  // (1/ln 2) * ln 2 is 1 up to rounding noise, which must not round up to 2.
  EXPECT_EQ(repetitions_for(1.0, 1.0 / std::log(2.0), Rational(1, 2)), 1u);
}

TEST(SampleIndices, WithReplacementInRange) {
  Rng r(5);
  const auto idx = sample_indices(3, 1000, r);
  EXPECT_EQ(idx.size(), 1000u);
  std::set<std::size_t> distinct(idx.begin(), idx.end());
  EXPECT_EQ(distinct.size(), 3u);
}
