#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattest/codeformula.hpp"
#include "lattest/io.hpp"
#include "lattest/lattice.hpp"
#include "lattest/query.hpp"

namespace lattest {

/// A lattice plus the lazily built structures the generators and oracles use.
class LatticeContext {
 public:
  explicit LatticeContext(io::LatticeFile file, std::size_t coset_cap = kDefaultCosetCap);

  const io::LatticeFile& file() const { return file_; }
  const LatticeBasis& basis() const { return file_.basis; }
  std::size_t n() const { return file_.basis.dim(); }

  /// V = L mod d; ResourceLimit when |V| exceeds the cap, RankError when L is
  /// not full rank.
  std::shared_ptr<const ModulusStructure> modulus() const;
  /// ConfigError unless the file records Reed-Muller levels.
  const CodeFormulaLattice& code_formula() const;
  bool has_code_formula() const { return !file_.rm_degrees.empty(); }
  bool is_knapsack() const { return file_.knapsack.has_value(); }

  /// A uniformly random member: a point of V, or (z, <a, z>) with z in
  /// [-3, 3]^{n-1} for knapsack lattices.
  RatVector random_member(Rng& rng) const;
  /// Exact d_p(t, L)^p for t in span(L) (InvalidInput outside the span when L
  /// is not full rank).
  DistanceResult distance(std::span<const Rational> t, int p) const;

 private:
  io::LatticeFile file_;
  std::size_t coset_cap_;
  mutable std::shared_ptr<const ModulusStructure> modulus_;
  mutable std::optional<CodeFormulaLattice> code_formula_;
};

struct CertifiedInput {
  RatVector t;
  Rational dist_pow_p;   // d_p(t, L)^p, or a lower bound when !exact
  bool exact = true;
  std::string strategy;  // perturbation | scaled-codeword | outside-span | member | close
};

inline constexpr std::size_t kDefaultGenerationAttempts = 256;

/// t with d_p(t, L)^p >= eps^p n, certified by an oracle. Tries random
/// perturbations of members (integral, half-integral and mixed offsets in
/// turn), then 2^k times a bit vector far from C_k (code-formula lattices),
/// then D e_j for j in the complement support (rank-deficient lattices).
/// GenerationFailed when all of them fail.
CertifiedInput generate_far_input(const LatticeContext& l, const Rational& eps, int p, Rng& rng,
                                  std::size_t attempts = kDefaultGenerationAttempts);

/// t with d_p(t, L)^p <= eps^p n and t not in L when eps > 0: a member with
/// a few coordinates moved by fractions, certified by the oracle.
CertifiedInput generate_close_input(const LatticeContext& l, const Rational& eps, int p, Rng& rng,
                                    std::size_t attempts = kDefaultGenerationAttempts);

/// One point of the parameter grid. Unused fields keep their defaults.
struct GridPoint {
  Rational eps{1, 4};
  Rational s{1, 3};
  Rational c{1, 3};
  Rational eps1{0};
  Rational eps2{1, 4};
  int p = 1;

  std::string key() const;
};

enum class InputKind { kMember, kFar, kClose, kFixed };
std::string to_string(InputKind k);
/// ConfigError on an unknown name.
InputKind input_kind_from_string(const std::string& s);

/// Tester ids: integer, code-formula, linear-code-formula, tolerant-integer,
/// tolerant-code-formula, knapsack, lifted-knapsack. ConfigError when the id
/// is unknown or the lattice lacks the structure it needs.
TesterPtr make_tester(const LatticeContext& l, const std::string& id, const GridPoint& g);
bool is_tolerant_tester(const std::string& id);
std::vector<std::string> tester_ids();

struct ExperimentConfig {
  io::LatticeFile lattice;
  std::string tester = "code-formula";
  std::vector<GridPoint> grid;
  InputKind inputs = InputKind::kFar;
  std::optional<RatVector> fixed_input;  // for InputKind::kFixed
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::filesystem::path jsonl_path;  // empty: no per-trial rows
  std::filesystem::path csv_path;    // empty: no aggregate file
  bool record_queries = true;        // include the transcript in JSONL rows
  std::size_t coset_cap = kDefaultCosetCap;
};

struct TrialAggregate {
  std::size_t cell = 0;
  GridPoint params;
  std::string tester;
  InputKind inputs = InputKind::kFar;
  std::size_t trials = 0;
  std::size_t accepts = 0;
  Rational accept_rate{0};
  double mean_queries = 0;
  std::size_t max_queries = 0;
  std::size_t budget = 0;
  std::pair<double, double> wilson{0, 1};
  std::string error;  // nonempty when the cell could not run (e.g. ResourceLimit)
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

/// Wilson score interval for `successes` out of `trials` at the given z.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = kWilsonZ99);

/// Runs every grid cell for cfg.trials trials. Trial t of cell c uses the
/// stream trial_stream(c, t) of the master seed: split(1) draws the input,
/// split(2) drives the tester. ConfigError when the config is unusable;
/// ResourceLimit and GenerationFailed are recorded per cell.
std::vector<TrialAggregate> run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeaderComment = "# lattest-aggregate-csv v1";
std::string csv_header();
std::string csv_row(const TrialAggregate& a, std::uint64_t seed);

/// accept_rate_vs_eps.svg and queries_vs_eps.svg in `dir`. InvalidInput on
/// an empty list. Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const std::vector<TrialAggregate>& aggregates,
                                              const std::filesystem::path& dir);

/// Reads aggregates back from a CSV written by run_experiment.
std::vector<TrialAggregate> read_aggregates_csv(const std::filesystem::path& path);

}  // namespace lattest
