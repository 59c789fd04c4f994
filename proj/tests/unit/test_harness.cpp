#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lattest/errors.hpp"
#include "lattest/harness.hpp"

using namespace lattest;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lattest_harness_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig toy_config() {
  ExperimentConfig cfg;
  cfg.lattice = io::rm_lattice_file({1, 2}, 3);
  cfg.tester = "code-formula";
  cfg.grid = {GridPoint{}};
  cfg.trials = 40;
  cfg.seed = 17;
  return cfg;
}

}  // namespace

TEST(Wilson, ReferenceValues) {
  // Reference values from the closed-form score interval at z = 2.5758.
  auto [lo, hi] = wilson_interval(50, 100);
  EXPECT_NEAR(lo, 0.37527962504483986, 1e-12);
  EXPECT_NEAR(hi, 0.6247203749551602, 1e-12);
  std::tie(lo, hi) = wilson_interval(0, 10);
  EXPECT_NEAR(lo, 0.0, 1e-12);
  EXPECT_NEAR(hi, 0.3988540933049081, 1e-12);
  std::tie(lo, hi) = wilson_interval(200, 200);
  EXPECT_NEAR(lo, 0.9678907255736567, 1e-12);
  EXPECT_NEAR(hi, 1.0, 1e-12);
}

TEST(InputKind, RoundTrip) {
  for (auto k : {InputKind::kMember, InputKind::kFar, InputKind::kClose, InputKind::kFixed})
    EXPECT_EQ(input_kind_from_string(to_string(k)), k);
  EXPECT_THROW(input_kind_from_string("nearby"), ConfigError);
}

TEST(MakeTester, UnknownIdsAndMissingStructure) {
  const LatticeContext toy(io::rm_lattice_file({1, 2}, 3));
  EXPECT_THROW(make_tester(toy, "no-such-tester", GridPoint{}), ConfigError);
  const LatticeContext z(io::integer_lattice_file(4));
  EXPECT_THROW(make_tester(z, "knapsack", GridPoint{}), ConfigError);
  EXPECT_THROW(make_tester(z, "code-formula", GridPoint{}), ConfigError);
  for (const auto& id : tester_ids()) {
    if (id == "knapsack" || id == "lifted-knapsack") continue;
    if (id == "integer" || id == "tolerant-integer") {
      EXPECT_NO_THROW(make_tester(z, id, GridPoint{})) << id;
    } else {
      EXPECT_NO_THROW(make_tester(toy, id, GridPoint{})) << id;
    }
  }
}

TEST(Generators, FarInputsAreCertified) {
  const LatticeContext toy(io::rm_lattice_file({1, 2}, 3));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto c = generate_far_input(toy, Rational(1, 4), 1, rng);
    EXPECT_GE(c.dist_pow_p, 2);
    if (c.exact) {
      EXPECT_EQ(toy.distance(c.t, 1).dist_pow_p, c.dist_pow_p);
    }
  }
}

TEST(Generators, CloseInputsAreCertified) {
  const LatticeContext toy(io::rm_lattice_file({1, 2}, 3));
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto c = generate_close_input(toy, Rational(1, 8), 1, rng);
    EXPECT_GT(c.dist_pow_p, 0);
    EXPECT_LE(c.dist_pow_p, 1);
    EXPECT_EQ(toy.distance(c.t, 1).dist_pow_p, c.dist_pow_p);
  }
}

TEST(Generators, FailBeyondTheCoveringRadius) {
  // eps n = 6 exceeds every l1 distance to this lattice.
  const LatticeContext toy(io::rm_lattice_file({1, 2}, 3));
  Rng rng(5);
  EXPECT_THROW(generate_far_input(toy, Rational(3, 4), 1, rng, 16), GenerationFailed);
}

TEST(Generators, KnapsackUsesOutsideSpanInstances) {
  const LatticeContext ks(io::knapsack_lattice_file({2, 3}));
  Rng rng(6);
  const auto c = generate_far_input(ks, Rational(1, 4), 1, rng);
  EXPECT_GE(c.dist_pow_p, Rational(3, 4));
}

TEST(RunExperiment, MembersAlwaysAccepted) {
  auto cfg = toy_config();
  cfg.inputs = InputKind::kMember;
  const auto aggs = run_experiment(cfg);
  ASSERT_EQ(aggs.size(), 1u);
  EXPECT_EQ(aggs[0].accepts, aggs[0].trials);
  EXPECT_EQ(aggs[0].accept_rate, 1);
  EXPECT_LE(aggs[0].max_queries, aggs[0].budget);
}

TEST(RunExperiment, HalfIntegralInputNeverAcceptedByIntegerTester) {
  ExperimentConfig cfg;
  cfg.lattice = io::integer_lattice_file(8);
  cfg.tester = "integer";
  cfg.grid = {GridPoint{}};
  cfg.inputs = InputKind::kFixed;
  cfg.fixed_input = RatVector(8, Rational(1, 2));
  cfg.trials = 50;
  const auto aggs = run_experiment(cfg);
  EXPECT_EQ(aggs[0].accepts, 0u);
  EXPECT_EQ(aggs[0].accept_rate, 0);
}

TEST(RunExperiment, BitIdenticalReruns) {
  auto cfg = toy_config();
  cfg.jsonl_path = scratch("a.jsonl");
  cfg.csv_path = scratch("a.csv");
  run_experiment(cfg);
  cfg.jsonl_path = scratch("b.jsonl");
  cfg.csv_path = scratch("b.csv");
  run_experiment(cfg);
  EXPECT_EQ(slurp(scratch("a.jsonl")), slurp(scratch("b.jsonl")));
  EXPECT_EQ(slurp(scratch("a.csv")), slurp(scratch("b.csv")));
  EXPECT_FALSE(slurp(scratch("a.jsonl")).empty());
}

TEST(RunExperiment, BudgetShrinksAsEpsGrows) {
  ExperimentConfig cfg;
  cfg.lattice = io::integer_lattice_file(16);
  cfg.tester = "integer";
  for (auto e : {Rational(1, 8), Rational(1, 4), Rational(1, 2)}) {
    GridPoint g;
    g.eps = e;
    cfg.grid.push_back(g);
  }
  cfg.trials = 20;
  const auto aggs = run_experiment(cfg);
  ASSERT_EQ(aggs.size(), 3u);
  EXPECT_GT(aggs[0].budget, aggs[1].budget);
  EXPECT_GT(aggs[1].budget, aggs[2].budget);
}

TEST(RunExperiment, ResourceLimitIsRecordedPerCell) {
  auto cfg = toy_config();
  cfg.coset_cap = 16;
  cfg.trials = 3;
  const auto aggs = run_experiment(cfg);
  ASSERT_EQ(aggs.size(), 1u);
  EXPECT_FALSE(aggs[0].error.empty());
  EXPECT_EQ(aggs[0].trials, 0u);
}

TEST(Csv, RoundTrip) {
  auto cfg = toy_config();
  cfg.inputs = InputKind::kMember;
  GridPoint g2;
  g2.eps = Rational(1, 2);
  cfg.grid.push_back(g2);
  cfg.csv_path = scratch("rt.csv");
  const auto aggs = run_experiment(cfg);
  const auto back = read_aggregates_csv(cfg.csv_path);
  ASSERT_EQ(back.size(), aggs.size());
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    EXPECT_EQ(back[i].params.key(), aggs[i].params.key());
    EXPECT_EQ(back[i].accepts, aggs[i].accepts);
    EXPECT_EQ(back[i].accept_rate, aggs[i].accept_rate);
    EXPECT_EQ(back[i].budget, aggs[i].budget);
    EXPECT_EQ(back[i].tester, aggs[i].tester);
  }
  const std::string text = slurp(cfg.csv_path);
  EXPECT_EQ(text.rfind(kCsvHeaderComment, 0), 0u);
}

TEST(Plots, WritesBothFiguresForOneOrMoreCells) {
  auto cfg = toy_config();
  cfg.inputs = InputKind::kMember;
  cfg.trials = 5;
  const auto one = run_experiment(cfg);
  const fs::path d1 = scratch("plots1");
  EXPECT_EQ(emit_plots(one, d1).size(), 2u);
  EXPECT_TRUE(fs::exists(d1 / "accept_rate_vs_eps.svg"));
  EXPECT_TRUE(fs::exists(d1 / "queries_vs_eps.svg"));
  cfg.grid.clear();
  for (auto e : {Rational(1, 8), Rational(1, 4), Rational(1, 2)}) {
    GridPoint g;
    g.eps = e;
    cfg.grid.push_back(g);
  }
  const auto three = run_experiment(cfg);
  const fs::path d3 = scratch("plots3");
  emit_plots(three, d3);
  EXPECT_NE(slurp(d3 / "accept_rate_vs_eps.svg").find("<svg"), std::string::npos);
  EXPECT_THROW(emit_plots({}, scratch("plots0")), InvalidInput);
}
