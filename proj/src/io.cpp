#include "lattest/io.hpp"

#include <fstream>
#include <sstream>

#include "lattest/errors.hpp"
#include "lattest/testers.hpp"

namespace lattest::io {

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json tree_node_to_json(const DecisionTree& t, std::size_t node) {
  const auto& n = t.nodes()[node];
  if (!n.query) return Json{{"leaf", n.accept ? 1 : 0}};
  Json children = Json::array();
  for (auto c : n.children) children.push_back(tree_node_to_json(t, c));
  return Json{{"query", *n.query + 1}, {"children", children}};
}

DecisionTree tree_node_from_json(const Json& j, std::size_t alphabet) {
  if (!j.is_object()) throw ConfigError("tree node must be an object");
  if (j.contains("leaf")) {
    const int v = j.at("leaf").get<int>();
    if (v != 0 && v != 1) throw ConfigError("tree leaf label must be 0 or 1");
    return DecisionTree::leaf(alphabet, v == 1);
  }
  const auto q = j.at("query").get<long>();
  if (q < 1) throw ConfigError("tree query indices are 1-based");
  const Json& kids = j.at("children");
  if (!kids.is_array() || kids.size() != alphabet) throw ConfigError("tree node needs one child per symbol");
  std::vector<DecisionTree> children;
  for (const auto& k : kids) children.push_back(tree_node_from_json(k, alphabet));
  return DecisionTree::query(static_cast<std::size_t>(q - 1), std::move(children));
}

}  // namespace

Json to_json(const Rational& q) {
  if (is_integer(q) && q.get_num().fits_slong_p()) return Json(q.get_num().get_si());
  return Json(to_string(q));
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("expected an integer or a \"p/q\" string, got " + j.dump());
}

Json to_json(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

RatVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a JSON array for a vector");
  RatVector out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

Json to_json(const RatMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

RatMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a nonempty array of rows");
  std::vector<RatVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw ConfigError("matrix rows differ in length");
  }
  return RatMatrix::from_rows(rows, cols);
}

Json to_json(const LatticeFile& f) {
  Json out{{"basis", to_json(f.basis.basis())}, {"dim", f.basis.dim()}, {"kind", f.kind}};
  if (!f.rm_degrees.empty()) {
    out["rm_degrees"] = f.rm_degrees;
    out["r"] = f.rm_variables;
  }
  if (f.knapsack) out["a"] = *f.knapsack;
  return out;
}

LatticeFile lattice_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("basis")) throw ConfigError("lattice file needs a \"basis\" field");
    const RatMatrix b = matrix_from_json(j.at("basis"));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != b.cols()) {
      throw ConfigError("lattice \"dim\" does not match the basis width");
    }
    LatticeFile f{LatticeBasis(b)};
    f.kind = j.value("kind", std::string("generic"));
    if (j.contains("rm_degrees")) {
      f.rm_degrees = j.at("rm_degrees").get<std::vector<int>>();
      f.rm_variables = j.at("r").get<int>();
    }
    if (j.contains("a")) f.knapsack = j.at("a").get<std::vector<long>>();
    return f;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed lattice file: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("invalid lattice basis: ") + e.what());
  }
}

LatticeFile rm_lattice_file(const std::vector<int>& degrees, int r) {
  const CodeFormulaLattice l = CodeFormulaLattice::reed_muller(degrees, r);
  LatticeFile f{l.basis()};
  f.kind = "code-formula";
  f.rm_degrees = degrees;
  f.rm_variables = r;
  return f;
}

LatticeFile integer_lattice_file(std::size_t n) {
  LatticeFile f{LatticeBasis::integer_lattice(n)};
  f.kind = "integer";
  return f;
}

LatticeFile knapsack_lattice_file(const std::vector<long>& a) {
  LatticeFile f{knapsack_lattice(a)};
  f.kind = "knapsack";
  f.knapsack = a;
  return f;
}

Json to_json(const BinaryLinearCode& c) {
  Json gens = Json::array();
  for (const auto& g : c.generator()) gens.push_back(g);
  return Json{{"n", c.n()}, {"k", c.k()}, {"generator", gens}};
}

BinaryLinearCode code_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<BitVector> rows;
    for (const auto& r : j.at("generator")) rows.push_back(r.get<BitVector>());
    BinaryLinearCode c = BinaryLinearCode::from_spanning_set(n, rows);
    if (j.contains("k") && j.at("k").get<std::size_t>() != c.k()) throw ConfigError("code \"k\" does not match its rank");
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed code file: ") + e.what());
  }
}

Json to_json(const DistanceResult& r) {
  return Json{{"p", r.p}, {"dist_pow_p", to_string(r.dist_pow_p)}, {"witness", to_json(r.witness)}};
}

Json to_json(const TestOutcome& o) {
  Json queries = Json::array();
  for (const auto& q : o.transcript) queries.push_back(Json{{"index", q.index + 1}, {"value", to_json(q.value)}});
  return Json{{"verdict", o.accepted() ? "accept" : "reject"}, {"queries", queries}, {"query_count", o.query_count}};
}

Json to_json(const TreeDistribution& t) {
  Json trees = Json::array();
  for (std::size_t i = 0; i < t.trees.size(); ++i) {
    trees.push_back(Json{{"weight", to_string(t.weights[i])}, {"root", tree_node_to_json(t.trees[i], 0)}});
  }
  return Json{{"dim", t.dim}, {"alphabet", t.alphabet()}, {"trees", trees}};
}

TreeDistribution trees_from_json(const Json& j) {
  try {
    TreeDistribution t;
    t.dim = j.at("dim").get<std::size_t>();
    const auto d = j.at("alphabet").get<std::size_t>();
    for (const auto& e : j.at("trees")) {
      t.weights.push_back(rational_from_json(e.at("weight")));
      t.trees.push_back(tree_node_from_json(e.at("root"), d));
    }
    t.validate();
    return t;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed tree file: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("invalid tree distribution: ") + e.what());
  }
}

RatVector parse_rational_list(const std::string& text) {
  RatVector out;
  try {
    for (const auto& s : split_commas(text)) out.push_back(parse_rational(s));
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& v : parse_int_list(text)) {
    if (v < 1) throw ConfigError("indices are 1-based");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& s : split_commas(text)) {
    const Rational q = parse_rational_list(s).front();
    if (!is_integer(q) || !q.get_num().fits_sint_p()) throw ConfigError("expected an integer, got '" + s + "'");
    out.push_back(static_cast<int>(q.get_num().get_si()));
  }
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace lattest::io
