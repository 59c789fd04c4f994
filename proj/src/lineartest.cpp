#include "lattest/lineartest.hpp"

#include <algorithm>

#include "lattest/errors.hpp"
#include "lattest/linalg.hpp"

namespace lattest {

namespace {

RatVector embed(std::span<const Rational> row, std::span<const std::size_t> coords, std::size_t n) {
  RatVector out(n, Rational(0));
  for (std::size_t b = 0; b < coords.size(); ++b) out[coords[b]] = row[b];
  return out;
}

// Sorts the query by coordinate; repeated coordinates must agree.
DualWitnessQuery canonical(const DualWitnessQuery& q, std::size_t n) {
  if (q.coords.size() != q.values.size()) throw InvalidInput("dual witness: coords and values differ in length");
  std::vector<std::size_t> order(q.coords.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&q](std::size_t a, std::size_t b) { return q.coords[a] < q.coords[b]; });
  DualWitnessQuery out;
  for (auto i : order) {
    if (q.coords[i] >= n) throw InvalidInput("dual witness: coordinate out of range");
    if (!out.coords.empty() && out.coords.back() == q.coords[i]) {
      if (out.values.back() != q.values[i]) throw InvalidInput("dual witness: conflicting values for a coordinate");
      continue;
    }
    out.coords.push_back(q.coords[i]);
    out.values.push_back(q.values[i]);
  }
  return out;
}

Integer reduce_mod(const Rational& value, std::int64_t d) {
  if (!is_integer(value)) throw InvalidInput("expected an integer input coordinate");
  return mod_floor(value.get_num(), Integer(static_cast<long>(d)));
}

IntVector shifted(std::span<const std::int64_t> x, std::span<const std::int64_t> v, std::int64_t d) {
  IntVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = ((x[i] % d + d) % d + v[i]) % d;
  return y;
}

// Dual-witness label of a leaf: accept iff the path's answers extend to L.
bool leaf_label(const DualBasisCache& cache, const DecisionTree::Leaf& leaf) {
  return !cache.witness({leaf.vars, to_rational(leaf.values)});
}

}  // namespace

std::vector<std::size_t> normalize_indices(std::vector<std::size_t> j) {
  std::sort(j.begin(), j.end());
  j.erase(std::unique(j.begin(), j.end()), j.end());
  return j;
}

RatMatrix projected_basis(const LatticeBasis& l, std::span<const std::size_t> j) {
  for (auto c : j) {
    if (c >= l.dim()) throw InvalidInput("projection: coordinate out of range");
  }
  if (j.empty()) return RatMatrix(0, 0);
  return hnf(l.basis().select_columns(j));
}

RatMatrix projected_dual_basis(const LatticeBasis& l, std::span<const std::size_t> j) {
  const RatMatrix pb = projected_basis(l, j);
  if (pb.rows() == 0) return RatMatrix(0, j.size());
  return span_dual_basis(pb);
}

std::optional<RatVector> dual_witness(const LatticeBasis& l, const DualWitnessQuery& q) {
  return DualBasisCache(l).witness(q);
}

const DualBasisCache::Entry& DualBasisCache::entry(const std::vector<std::size_t>& j) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(j);
  if (it != cache_.end()) return it->second;
  const RatMatrix pb = projected_basis(lattice_, j);
  Entry e;
  if (pb.rows() == 0) {
    e.dual = RatMatrix(0, j.size());
    e.complement = RatMatrix::identity(j.size());
  } else {
    e.dual = span_dual_basis(pb);
    e.complement = orthogonal_complement_basis(pb);
  }
  // std::map never invalidates references on insert.
  return cache_.emplace(j, std::move(e)).first->second;
}

std::optional<RatVector> DualBasisCache::witness(const DualWitnessQuery& query) const {
  const DualWitnessQuery q = canonical(query, lattice_.dim());
  if (q.coords.empty()) return std::nullopt;
  const Entry& e = entry(q.coords);
  for (std::size_t r = 0; r < e.dual.rows(); ++r) {
    if (!is_integer(dot(e.dual.row(r), q.values))) return embed(e.dual.row(r), q.coords, lattice_.dim());
  }
  for (std::size_t r = 0; r < e.complement.rows(); ++r) {
    const Rational ip = dot(e.complement.row(r), q.values);
    if (sgn(ip) != 0) return embed(scale(Rational(1) / (2 * ip), e.complement.row(r)), q.coords, lattice_.dim());
  }
  return std::nullopt;
}

NonAdaptiveLinearTester::NonAdaptiveLinearTester(const LatticeBasis& l, IndexSampler sampler, std::size_t budget,
                                                 std::string name)
    : cache_(std::make_shared<const DualBasisCache>(l)),
      sampler_(std::move(sampler)),
      budget_(budget),
      name_(std::move(name)) {
  if (!sampler_) throw InvalidInput("linear tester needs an index sampler");
}

Verdict NonAdaptiveLinearTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != dim()) throw InvalidInput("linear tester: input dimension mismatch");
  DualWitnessQuery q;
  q.coords = normalize_indices(sampler_(rng));
  for (auto j : q.coords) q.values.push_back(input.query(j));
  return verdict_of(!cache_->witness(q).has_value());
}

IndexSampler harvest_index_sampler(TesterPtr tester, std::shared_ptr<const ModulusStructure> m) {
  if (!tester || !m || tester->dim() != m->dim()) throw InvalidInput("harvest: tester and lattice dimensions differ");
  return [tester, m](Rng& rng) {
    const auto v = m->rep(static_cast<std::size_t>(rng.below(m->size())));
    QueryAccess member = QueryAccess::over(to_rational(v));
    tester->run(member, rng);
    return member.queried_indices();
  };
}

TesterPtr linear_mode(const LatticeBasis& l, TesterPtr tester, std::shared_ptr<const ModulusStructure> m) {
  const std::size_t budget = tester->query_budget();
  const std::string name = "linear[" + tester->name() + "]";
  return std::make_shared<NonAdaptiveLinearTester>(l, harvest_index_sampler(std::move(tester), std::move(m)), budget,
                                                   name);
}

DecisionTree DecisionTree::leaf(std::size_t alphabet, bool accept) {
  if (alphabet == 0) throw InvalidInput("decision tree alphabet must be positive");
  Node node;
  node.accept = accept;
  return DecisionTree(alphabet, {node});
}

DecisionTree DecisionTree::query(std::size_t coordinate, std::vector<DecisionTree> children) {
  if (children.empty()) throw InvalidInput("query node needs one child per symbol");
  const std::size_t d = children.size();
  std::vector<Node> nodes(1);
  nodes[0].query = coordinate;
  for (const auto& child : children) {
    if (child.alphabet() != d) throw InvalidInput("query node: child alphabet differs from branching factor");
    const std::size_t offset = nodes.size();
    nodes[0].children.push_back(offset);
    for (Node n : child.nodes_) {
      for (auto& c : n.children) c += offset;
      nodes.push_back(std::move(n));
    }
  }
  DecisionTree out(d, std::move(nodes));
  out.validate_paths();
  return out;
}

void DecisionTree::validate_paths() const {
  for (const auto& l : leaves()) {
    auto vars = l.vars;
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
      throw InvalidInput("decision tree reads a coordinate twice on one path");
    }
  }
}

std::size_t DecisionTree::depth() const {
  std::size_t best = 0;
  for (const auto& l : leaves()) best = std::max(best, l.vars.size());
  return best;
}

std::vector<DecisionTree::Leaf> DecisionTree::leaves() const {
  std::vector<Leaf> out;
  std::vector<std::size_t> vars;
  std::vector<std::int64_t> values;
  auto walk = [&](auto&& self, std::size_t node) -> void {
    const Node& n = nodes_[node];
    if (!n.query) {
      out.push_back({node, vars, values, n.accept});
      return;
    }
    vars.push_back(*n.query);
    for (std::size_t a = 0; a < n.children.size(); ++a) {
      values.push_back(static_cast<std::int64_t>(a));
      self(self, n.children[a]);
      values.pop_back();
    }
    vars.pop_back();
  };
  walk(walk, 0);
  return out;
}

std::size_t DecisionTree::leaf_index_for(std::span<const std::int64_t> x) const {
  std::size_t node = 0;
  while (nodes_[node].query) {
    const std::size_t j = *nodes_[node].query;
    if (j >= x.size()) throw InvalidInput("decision tree reads past the input");
    const std::int64_t a = x[j];
    if (a < 0 || static_cast<std::size_t>(a) >= alphabet_) throw InvalidInput("decision tree input outside alphabet");
    node = nodes_[node].children[static_cast<std::size_t>(a)];
  }
  return node;
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const std::int64_t> x) const {
  return nodes_[leaf_index_for(x)];
}

Verdict DecisionTree::evaluate(QueryAccess& input) const {
  std::size_t node = 0;
  while (nodes_[node].query) {
    const Rational v = input.query(*nodes_[node].query);
    if (!is_integer(v) || sgn(v) < 0 || v >= static_cast<unsigned long>(alphabet_)) {
      throw InvalidInput("decision tree input outside alphabet");
    }
    node = nodes_[node].children[v.get_num().get_ui()];
  }
  return verdict_of(nodes_[node].accept);
}

DecisionTree DecisionTree::relabeled(const std::map<std::size_t, bool>& labels) const {
  DecisionTree out = *this;
  for (const auto& [node, accept] : labels) {
    if (node >= out.nodes_.size() || out.nodes_[node].query) throw InvalidInput("relabel: not a leaf");
    out.nodes_[node].accept = accept;
  }
  return out;
}

void TreeDistribution::validate() const {
  if (trees.empty() || trees.size() != weights.size()) throw InvalidInput("tree distribution: trees and weights differ");
  Rational total(0);
  for (const auto& w : weights) {
    if (sgn(w) <= 0) throw InvalidInput("tree distribution: weights must be positive");
    total += w;
  }
  if (total != 1) throw InvalidInput("tree distribution: weights must sum to 1");
  for (const auto& t : trees) {
    if (t.alphabet() != alphabet()) throw InvalidInput("tree distribution: trees disagree on the alphabet");
    for (const auto& n : t.nodes()) {
      if (n.query && *n.query >= dim) throw InvalidInput("tree distribution: read beyond the input dimension");
    }
  }
}

std::size_t TreeDistribution::max_depth() const {
  std::size_t best = 0;
  for (const auto& t : trees) best = std::max(best, t.depth());
  return best;
}

std::size_t TreeDistribution::sample(Rng& rng) const {
  const Integer den = lcm_of_denominators(weights);
  if (!den.fits_ulong_p()) throw ResourceLimit("tree distribution: weight denominators too large");
  const std::uint64_t r = rng.below(den.get_ui());
  Integer acc(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += Rational(weights[i] * den).get_num();
    if (Integer(static_cast<unsigned long>(r)) < acc) return i;
  }
  return weights.size() - 1;
}

Rational acceptance_probability(const TreeDistribution& t, std::span<const std::int64_t> y) {
  Rational p(0);
  for (std::size_t i = 0; i < t.trees.size(); ++i) {
    if (t.trees[i].evaluate(y)) p += t.weights[i];
  }
  return p;
}

Rational rho_x(const TreeDistribution& t, const ModulusStructure& m, std::span<const std::int64_t> x) {
  if (x.size() != m.dim()) throw InvalidInput("rho_x: dimension mismatch");
  Rational total(0);
  for (std::size_t k = 0; k < m.size(); ++k) total += acceptance_probability(t, shifted(x, m.rep(k), m.d()));
  return total / static_cast<unsigned long>(m.size());
}

Rational rho(const TreeDistribution& t, const ModulusStructure& m) {
  const IntVector zero(m.dim(), 0);
  return rho_x(t, m, zero);
}

namespace {

DecisionTree relabel_with(const DecisionTree& tree, const DualBasisCache& cache) {
  std::map<std::size_t, bool> labels;
  for (const auto& leaf : tree.leaves()) labels[leaf.node] = leaf_label(cache, leaf);
  return tree.relabeled(labels);
}

void check_source(const TreeDistribution& t, const LatticeBasis& l, const ModulusStructure& m) {
  t.validate();
  if (t.dim != l.dim() || m.dim() != l.dim()) throw InvalidInput("tree distribution and lattice dimensions differ");
  if (t.alphabet() != static_cast<std::size_t>(m.d())) throw InvalidInput("tree alphabet must equal the modulus d");
}

}  // namespace

DecisionTree optimal_relabel(const DecisionTree& tree, const LatticeBasis& l, const ModulusStructure& m) {
  if (tree.alphabet() != static_cast<std::size_t>(m.d())) throw InvalidInput("tree alphabet must equal the modulus d");
  return relabel_with(tree, DualBasisCache(l));
}

bool is_linear(const TreeDistribution& t, const LatticeBasis& l) {
  const DualBasisCache cache(l);
  for (const auto& tree : t.trees) {
    for (const auto& leaf : tree.leaves()) {
      if (leaf.accept != (leaf_label(cache, leaf))) return false;
    }
  }
  return true;
}

AdaptiveLinearTester::AdaptiveLinearTester(const TreeDistribution& source, const LatticeBasis& l,
                                           std::shared_ptr<const ModulusStructure> m)
    : modulus_(std::move(m)) {
  if (!modulus_) throw InvalidInput("adaptive linear tester needs the modulus structure");
  check_source(source, l, *modulus_);
  const DualBasisCache cache(l);
  relabeled_.dim = source.dim;
  relabeled_.weights = source.weights;
  for (const auto& tree : source.trees) relabeled_.trees.push_back(relabel_with(tree, cache));
}

Verdict AdaptiveLinearTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != dim()) throw InvalidInput("adaptive linear tester: input dimension mismatch");
  const std::size_t idx = relabeled_.sample(rng);
  const auto v = modulus_->rep(static_cast<std::size_t>(rng.below(modulus_->size())));
  const std::int64_t d = modulus_->d();
  QueryAccess shifted_input = derive(input, [v, d](std::size_t i, const Rational& value) {
    return Rational(mod_floor(reduce_mod(value, d) + static_cast<long>(v[i]), Integer(static_cast<long>(d))));
  });
  return relabeled_.trees[idx].evaluate(shifted_input);
}

Rational AdaptiveLinearTester::exact_acceptance(std::span<const std::int64_t> x) const {
  return rho_x(relabeled_, *modulus_, x);
}

AdaptiveLinearTester two_sided_to_linear(const TreeDistribution& source, const LatticeBasis& l,
                                         std::shared_ptr<const ModulusStructure> m) {
  return AdaptiveLinearTester(source, l, std::move(m));
}

NonAdaptiveFromTrees::NonAdaptiveFromTrees(const TreeDistribution& source, const LatticeBasis& l,
                                           std::shared_ptr<const ModulusStructure> m)
    : source_(source), modulus_(std::move(m)), cache_(std::make_shared<const DualBasisCache>(l)) {
  if (!modulus_) throw InvalidInput("non-adaptive transform needs the modulus structure");
  check_source(source_, l, *modulus_);
  if (!is_linear(source_, l)) throw InvalidInput("non-adaptive transform needs a linear source tester");
}

Verdict NonAdaptiveFromTrees::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != dim()) throw InvalidInput("non-adaptive tester: input dimension mismatch");
  const std::size_t idx = source_.sample(rng);
  const auto v = modulus_->rep(static_cast<std::size_t>(rng.below(modulus_->size())));
  const auto& tree = source_.trees[idx];
  DualWitnessQuery q;
  // The path taken on the member v fixes J before the input is read.
  std::size_t node = 0;
  while (tree.nodes()[node].query) {
    const std::size_t j = *tree.nodes()[node].query;
    q.coords.push_back(j);
    node = tree.nodes()[node].children[static_cast<std::size_t>(v[j])];
  }
  for (auto j : q.coords) q.values.push_back(input.query(j));
  return verdict_of(!cache_->witness(q).has_value());
}

Rational NonAdaptiveFromTrees::exact_acceptance(std::span<const std::int64_t> x) const {
  if (x.size() != dim()) throw InvalidInput("exact acceptance: dimension mismatch");
  const RatVector xr = to_rational(x);
  Rational total(0);
  for (std::size_t i = 0; i < source_.trees.size(); ++i) {
    const auto& tree = source_.trees[i];
    std::map<std::size_t, std::size_t> hits;  // leaf node -> number of v reaching it
    for (std::size_t k = 0; k < modulus_->size(); ++k) ++hits[tree.leaf_index_for(modulus_->rep(k))];
    std::map<std::size_t, std::vector<std::size_t>> vars_of;
    for (const auto& leaf : tree.leaves()) vars_of[leaf.node] = leaf.vars;
    std::size_t accepted = 0;
    for (const auto& [node, count] : hits) {
      DualWitnessQuery q;
      q.coords = vars_of[node];
      for (auto j : q.coords) q.values.push_back(xr[j]);
      if (!cache_->witness(q)) accepted += count;
    }
    Rational share(static_cast<unsigned long>(accepted), static_cast<unsigned long>(modulus_->size()));
    share.canonicalize();
    total += source_.weights[i] * share;
  }
  return total;
}

NonAdaptiveFromTrees adaptive_to_nonadaptive(const TreeDistribution& source, const LatticeBasis& l,
                                             std::shared_ptr<const ModulusStructure> m) {
  return NonAdaptiveFromTrees(source, l, std::move(m));
}

BoundedToIntegerTester::BoundedToIntegerTester(TesterPtr bounded, std::int64_t d) : inner_(std::move(bounded)), d_(d) {
  if (!inner_) throw InvalidInput("mod-d lift needs a tester");
  if (d_ <= 0) throw InvalidInput("mod-d lift needs d >= 1");
}

Verdict BoundedToIntegerTester::run(QueryAccess& input, Rng& rng) const {
  const std::int64_t d = d_;
  QueryAccess reduced = derive(input, [d](std::size_t, const Rational& v) { return Rational(reduce_mod(v, d)); });
  return inner_->run(reduced, rng);
}

TesterPtr lift_bounded_to_integer(TesterPtr bounded, const ModulusStructure& m) {
  return std::make_shared<BoundedToIntegerTester>(std::move(bounded), m.d());
}

IntegerToRealTester::IntegerToRealTester(TesterPtr integer_tester, const Rational& eps, const Rational& s, int p,
                                         double c_z)
    : inner_(std::move(integer_tester)),
      integer_stage_(inner_ ? inner_->dim() : 0, eps / 2, s, p, c_z) {
  if (!inner_) throw InvalidInput("real lift needs a tester");
}

Verdict IntegerToRealTester::run(QueryAccess& input, Rng& rng) const {
  if (input.dim() != dim()) throw InvalidInput("real lift: input dimension mismatch");
  Rng stage_rng = rng.split(0);
  if (integer_stage_.run(input, stage_rng) == Verdict::kReject) return Verdict::kReject;
  QueryAccess integral = derive(input, [](std::size_t, const Rational& v) {
    if (!is_integer(v)) throw ImmediateReject{};
    return v;
  });
  Rng inner_rng = rng.split(1);
  try {
    return inner_->run(integral, inner_rng);
  } catch (const ImmediateReject&) {
    return Verdict::kReject;
  }
}

TesterPtr lift_integer_to_real(TesterPtr integer_tester, const Rational& eps, const Rational& s, int p, double c_z) {
  return std::make_shared<IntegerToRealTester>(std::move(integer_tester), eps, s, p, c_z);
}

}  // namespace lattest
