#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "lattest/lattice.hpp"
#include "lattest/query.hpp"
#include "lattest/testers.hpp"

namespace lattest {

/// A partial view of an input: values on the coordinates J (0-based).
struct DualWitnessQuery {
  std::vector<std::size_t> coords;
  RatVector values;  // aligned with coords
};

/// Sorted, de-duplicated copy of an index set.
std::vector<std::size_t> normalize_indices(std::vector<std::size_t> j);

/// Basis of the dual of proj_J(L), with rows in the |J|-dimensional
/// coordinate space. Rows span proj_J(L) (dual within its span) when the
/// projection is not full-dimensional; zero rows when it is {0}.
RatMatrix projected_dual_basis(const LatticeBasis& l, std::span<const std::size_t> j);

/// The projected lattice proj_J(L) in canonical (HNF) form.
RatMatrix projected_basis(const LatticeBasis& l, std::span<const std::size_t> j);

/// A vector alpha supported on J (embedded in R^n, zeros off J) with
/// <alpha, v> integral for every v in L and <alpha, w> non-integral, or
/// nothing when some lattice vector agrees with w on J. The first
/// projected-dual basis row with a non-integral product is returned; if w_J
/// leaves the span of proj_J(L), a complement direction scaled to give 1/2
/// is returned instead.
std::optional<RatVector> dual_witness(const LatticeBasis& l, const DualWitnessQuery& q);

/// Thread-safe memo of projected dual bases keyed by J.
class DualBasisCache {
 public:
  explicit DualBasisCache(LatticeBasis l) : lattice_(std::move(l)) {}
  const LatticeBasis& lattice() const { return lattice_; }
  std::optional<RatVector> witness(const DualWitnessQuery& q) const;

 private:
  struct Entry {
    RatMatrix dual;
    RatMatrix complement;  // basis of span(proj_J L)^perp inside R^J
  };
  const Entry& entry(const std::vector<std::size_t>& j) const;

  LatticeBasis lattice_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<std::size_t>, Entry> cache_;
};

using IndexSampler = std::function<std::vector<std::size_t>(Rng&)>;

/// Samples J, reads the input on J and accepts iff no dual witness exists.
class NonAdaptiveLinearTester final : public Tester {
 public:
  NonAdaptiveLinearTester(const LatticeBasis& l, IndexSampler sampler, std::size_t budget,
                          std::string name = "nonadaptive-linear");

  std::string name() const override { return name_; }
  std::size_t dim() const override { return cache_->lattice().dim(); }
  std::size_t query_budget() const override { return budget_; }
  Verdict run(QueryAccess& input, Rng& rng) const override;

 private:
  std::shared_ptr<const DualBasisCache> cache_;
  IndexSampler sampler_;
  std::size_t budget_;
  std::string name_;
};

/// Index sets read by `tester` when run on a uniformly random v in V.
IndexSampler harvest_index_sampler(TesterPtr tester, std::shared_ptr<const ModulusStructure> m);

/// Linear variant of an existing tester: J harvested from runs on members.
TesterPtr linear_mode(const LatticeBasis& l, TesterPtr tester, std::shared_ptr<const ModulusStructure> m);

/// Deterministic adaptive test over inputs in {0, ..., d-1}^n. Node 0 is the
/// root; an internal node reads one coordinate and branches on its value.
class DecisionTree {
 public:
  struct Node {
    std::optional<std::size_t> query;  // coordinate read here; empty at leaves
    std::vector<std::size_t> children;  // one per symbol, internal nodes only
    bool accept = false;                // leaf label
  };

  struct Leaf {
    std::size_t node;
    std::vector<std::size_t> vars;     // coordinates read on the path
    std::vector<std::int64_t> values;  // answers along the path
    bool accept;
  };

  static DecisionTree leaf(std::size_t alphabet, bool accept);
  static DecisionTree query(std::size_t coordinate, std::vector<DecisionTree> children);

  std::size_t alphabet() const { return alphabet_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::vector<Leaf> leaves() const;

  /// Reached leaf for a fully known input.
  const Node& leaf_for(std::span<const std::int64_t> x) const;
  std::size_t leaf_index_for(std::span<const std::int64_t> x) const;
  bool evaluate(std::span<const std::int64_t> x) const { return leaf_for(x).accept; }
  /// Evaluates through metered access; reads must be integers in [0, d).
  Verdict evaluate(QueryAccess& input) const;

  DecisionTree relabeled(const std::map<std::size_t, bool>& labels) const;

 private:
  DecisionTree(std::size_t alphabet, std::vector<Node> nodes) : alphabet_(alphabet), nodes_(std::move(nodes)) {}
  void validate_paths() const;

  std::size_t alphabet_;
  std::vector<Node> nodes_;
};

/// A randomized test as a distribution over decision trees.
struct TreeDistribution {
  std::size_t dim = 0;
  std::vector<DecisionTree> trees;
  std::vector<Rational> weights;

  /// InvalidInput unless weights are positive and sum to 1, every tree
  /// shares the alphabet, and every read is below `dim`.
  void validate() const;
  std::size_t alphabet() const { return trees.empty() ? 0 : trees.front().alphabet(); }
  std::size_t max_depth() const;
  std::size_t sample(Rng& rng) const;
};

/// Pr[test accepts y] for a fully known y.
Rational acceptance_probability(const TreeDistribution& t, std::span<const std::int64_t> y);
/// avg over v in V of Pr[test accepts (x + v) mod d].
Rational rho_x(const TreeDistribution& t, const ModulusStructure& m, std::span<const std::int64_t> x);
/// avg over y in V of Pr[test accepts y].
Rational rho(const TreeDistribution& t, const ModulusStructure& m);

/// Same tree; each leaf labelled accept iff no dual witness exists for the
/// values read along its path.
DecisionTree optimal_relabel(const DecisionTree& tree, const LatticeBasis& l, const ModulusStructure& m);

/// Whether every leaf already carries the dual-witness label.
bool is_linear(const TreeDistribution& t, const LatticeBasis& l);

/// Adaptive linear tester built from an arbitrary tree distribution: pick a
/// tree and v in V, then answer with the relabeled tree on (x + v) mod d.
class AdaptiveLinearTester final : public Tester {
 public:
  AdaptiveLinearTester(const TreeDistribution& source, const LatticeBasis& l,
                       std::shared_ptr<const ModulusStructure> m);

  std::string name() const override { return "adaptive-linear"; }
  std::size_t dim() const override { return relabeled_.dim; }
  std::size_t query_budget() const override { return relabeled_.max_depth(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

  /// Exact Pr[accept x] by enumerating trees and shifts.
  Rational exact_acceptance(std::span<const std::int64_t> x) const;
  const TreeDistribution& relabeled() const { return relabeled_; }

 private:
  TreeDistribution relabeled_;
  std::shared_ptr<const ModulusStructure> modulus_;
};

AdaptiveLinearTester two_sided_to_linear(const TreeDistribution& source, const LatticeBasis& l,
                                         std::shared_ptr<const ModulusStructure> m);

/// Non-adaptive linear tester from an adaptive linear one: run a sampled
/// tree on a uniformly random v in V, read the input on the path's
/// coordinates J, and accept iff no dual witness exists on J.
class NonAdaptiveFromTrees final : public Tester {
 public:
  /// InvalidInput unless `source` is linear.
  NonAdaptiveFromTrees(const TreeDistribution& source, const LatticeBasis& l,
                       std::shared_ptr<const ModulusStructure> m);

  std::string name() const override { return "nonadaptive-from-trees"; }
  std::size_t dim() const override { return source_.dim; }
  std::size_t query_budget() const override { return source_.max_depth(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

  Rational exact_acceptance(std::span<const std::int64_t> x) const;

 private:
  TreeDistribution source_;
  std::shared_ptr<const ModulusStructure> modulus_;
  std::shared_ptr<const DualBasisCache> cache_;
};

NonAdaptiveFromTrees adaptive_to_nonadaptive(const TreeDistribution& source, const LatticeBasis& l,
                                             std::shared_ptr<const ModulusStructure> m);

/// Tester over Z^n from one over {0, ..., d-1}^n: every read is reduced mod d.
class BoundedToIntegerTester final : public Tester {
 public:
  BoundedToIntegerTester(TesterPtr bounded, std::int64_t d);
  std::string name() const override { return "mod-d[" + inner_->name() + "]"; }
  std::size_t dim() const override { return inner_->dim(); }
  std::size_t query_budget() const override { return inner_->query_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

 private:
  TesterPtr inner_;
  std::int64_t d_;
};

TesterPtr lift_bounded_to_integer(TesterPtr bounded, const ModulusStructure& m);

/// Tester over rational inputs from one over Z^n built at eps/2: the Z^n
/// tester at eps/2 first, then the integer tester, rejecting at once on any
/// non-integral read.
class IntegerToRealTester final : public Tester {
 public:
  IntegerToRealTester(TesterPtr integer_tester, const Rational& eps, const Rational& s, int p = 1,
                      double c_z = kIntegerTesterConstant);
  std::string name() const override { return "real[" + inner_->name() + "]"; }
  std::size_t dim() const override { return inner_->dim(); }
  std::size_t query_budget() const override { return integer_stage_.query_budget() + inner_->query_budget(); }
  Verdict run(QueryAccess& input, Rng& rng) const override;

 private:
  TesterPtr inner_;
  IntegerLatticeTester integer_stage_;
};

TesterPtr lift_integer_to_real(TesterPtr integer_tester, const Rational& eps, const Rational& s, int p = 1,
                               double c_z = kIntegerTesterConstant);

}  // namespace lattest
