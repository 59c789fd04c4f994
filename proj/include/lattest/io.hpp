#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lattest/codeformula.hpp"
#include "lattest/codes.hpp"
#include "lattest/lattice.hpp"
#include "lattest/lineartest.hpp"
#include "lattest/query.hpp"

namespace lattest::io {

using Json = nlohmann::json;

/// Integers are written as JSON numbers when they fit, everything else as
/// "p/q" strings. Readers accept numbers and strings alike.
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json to_json(std::span<const Rational> v);
RatVector vector_from_json(const Json& j);
Json to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const Json& j);

/// A lattice together with the structure some testers need.
struct LatticeFile {
  LatticeFile() : basis(LatticeBasis::integer_lattice(1)) {}
  explicit LatticeFile(LatticeBasis b) : basis(std::move(b)) {}

  LatticeBasis basis;
  std::vector<int> rm_degrees;            // code-formula levels, when built from RM codes
  int rm_variables = -1;
  std::optional<std::vector<long>> knapsack;  // coefficients a, for knapsack lattices
  std::string kind = "generic";           // generic | integer | code-formula | knapsack
};

/// {"basis": [[...]], "dim": n} plus optional "kind", "rm_degrees", "r", "a".
Json to_json(const LatticeFile& f);
/// ConfigError on malformed files.
LatticeFile lattice_from_json(const Json& j);
LatticeFile rm_lattice_file(const std::vector<int>& degrees, int r);
LatticeFile integer_lattice_file(std::size_t n);
LatticeFile knapsack_lattice_file(const std::vector<long>& a);

/// {"n":, "k":, "generator": [[0/1, ...]]}.
Json to_json(const BinaryLinearCode& c);
BinaryLinearCode code_from_json(const Json& j);

/// {"p":, "dist_pow_p": "num/den", "witness": [...]}.
Json to_json(const DistanceResult& r);

/// {"verdict": "accept"|"reject", "queries": [{"index": i, "value": v}],
/// "query_count": q} with 1-based indices.
Json to_json(const TestOutcome& o);

/// {"dim": n, "alphabet": d, "trees": [{"weight": "p/q", "root": node}]}
/// where node is {"leaf": 0|1} or {"query": j, "children": [...]} and j is
/// 1-based.
Json to_json(const TreeDistribution& t);
TreeDistribution trees_from_json(const Json& j);

/// Comma-separated rationals or 1-based indices, as typed on a command line.
RatVector parse_rational_list(const std::string& text);
std::vector<std::size_t> parse_index_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// ConfigError when the file cannot be read or parsed.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace lattest::io
