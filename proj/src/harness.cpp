#include "lattest/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lattest/errors.hpp"
#include "lattest/lineartest.hpp"
#include "lattest/testers.hpp"

namespace lattest {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

bool is_identity(const RatMatrix& b) {
  return b.rows() == b.cols() && b == RatMatrix::identity(b.rows());
}

// Largest multiple of 2^-20 whose square is at most x, exact when x is a
// rational square.
Rational sqrt_lower_bound(const Rational& x) {
  Integer num_root, den_root;
  mpz_sqrt(num_root.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), x.get_den_mpz_t());
  if (num_root * num_root == x.get_num() && den_root * den_root == x.get_den()) return Rational(num_root, den_root);
  const Integer scale = Integer(1) << 20;
  const Integer scaled = floor_of(x * scale * scale);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational out(root, scale);
  out.canonicalize();
  return out;
}

enum class Offsets { kIntegers, kHalves, kMixed };

// Adds k/2 to each coordinate in [0, limit), k uniform in {0, ..., 2d-1};
// even k only for kIntegers, odd k only for kHalves.
RatVector perturb(RatVector base, std::size_t limit, std::int64_t d, Offsets mode, Rng& rng) {
  const auto span = static_cast<std::uint64_t>(2 * std::max<std::int64_t>(d, 1));
  for (std::size_t i = 0; i < limit; ++i) {
    std::uint64_t k = rng.below(span);
    if (mode == Offsets::kIntegers) k &= ~std::uint64_t{1};
    if (mode == Offsets::kHalves) k |= 1;
    Rational offset(static_cast<long>(k), 2);
    offset.canonicalize();
    base[i] += offset;
  }
  return base;
}

RatVector complete_knapsack(RatVector w, const std::vector<long>& a) {
  Rational last(0);
  for (std::size_t i = 0; i < a.size(); ++i) last += a[i] * w[i];
  w[a.size()] = last;
  return w;
}

TesterPtr build_tester(const LatticeContext& l, const std::string& id, const GridPoint& g) {
  const std::size_t n = l.n();
  auto need_integer = [&] {
    if (!is_identity(l.basis().basis())) throw ConfigError(id + " tester needs the lattice Z^n");
  };
  auto need_l1 = [&] {
    if (g.p != 1) throw ConfigError(id + " tester is defined for p = 1 only");
  };
  auto need_knapsack = [&]() -> const std::vector<long>& {
    if (!l.is_knapsack()) throw ConfigError(id + " tester needs a knapsack lattice file");
    return *l.file().knapsack;
  };
  if (id == "integer") {
    need_integer();
    return std::make_shared<IntegerLatticeTester>(n, g.eps, g.s, g.p);
  }
  if (id == "code-formula" || id == "linear-code-formula") {
    need_l1();
    const auto& cf = l.code_formula();
    auto t = std::make_shared<CodeFormulaTester>(cf, CodeTesterRegistry::for_reed_muller(cf), g.eps, g.s);
    if (id == "code-formula") return t;
    return linear_mode(l.basis(), t, l.modulus());
  }
  if (id == "tolerant-integer") {
    need_integer();
    need_l1();
    return std::make_shared<TolerantIntegerTester>(n, g.eps1, g.eps2, g.c, g.s);
  }
  if (id == "tolerant-code-formula") {
    need_l1();
    const auto& cf = l.code_formula();
    return std::make_shared<TolerantCodeFormulaTester>(cf, CodeTesterRegistry::for_reed_muller(cf), g.eps1, g.eps2,
                                                       g.c, g.s);
  }
  if (id == "knapsack") return std::make_shared<KnapsackTester>(need_knapsack(), g.eps, g.s, g.p);
  if (id == "lifted-knapsack") {
    auto inner = std::make_shared<KnapsackTester>(need_knapsack(), g.eps / 2, g.s, g.p);
    return std::make_shared<LiftedOutsideSpanTester>(l.basis(), inner, g.eps, g.p);
  }
  throw ConfigError("unknown tester '" + id + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

LatticeContext::LatticeContext(io::LatticeFile file, std::size_t coset_cap)
    : file_(std::move(file)), coset_cap_(coset_cap) {}

std::shared_ptr<const ModulusStructure> LatticeContext::modulus() const {
  if (!modulus_) modulus_ = std::make_shared<const ModulusStructure>(find_modulus(file_.basis, coset_cap_));
  return modulus_;
}

const CodeFormulaLattice& LatticeContext::code_formula() const {
  if (!has_code_formula()) throw ConfigError("lattice file does not record Reed-Muller code levels");
  if (!code_formula_) code_formula_ = CodeFormulaLattice::reed_muller(file_.rm_degrees, file_.rm_variables);
  return *code_formula_;
}

RatVector LatticeContext::random_member(Rng& rng) const {
  if (is_knapsack()) {
    const auto& a = *file_.knapsack;
    RatVector w(a.size() + 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) w[i] = static_cast<long>(rng.below(7)) - 3;
    return complete_knapsack(std::move(w), a);
  }
  const auto m = modulus();
  return to_rational(m->rep(static_cast<std::size_t>(rng.below(m->size()))));
}

DistanceResult LatticeContext::distance(std::span<const Rational> t, int p) const {
  if (file_.basis.full_rank()) return distance_oracle(*modulus(), t, p);
  if (is_knapsack()) return knapsack_distance(*file_.knapsack, t, p);
  throw RankError("no exact distance oracle for this rank-deficient lattice");
}

CertifiedInput generate_far_input(const LatticeContext& l, const Rational& eps, int p, Rng& rng,
                                  std::size_t attempts) {
  const Rational threshold = far_threshold_pow(eps, p, l.n());
  const bool full = l.basis().full_rank();

  if (full || l.is_knapsack()) {
    const std::int64_t d = full ? l.modulus()->d() : 1;
    const std::size_t limit = full ? l.n() : l.n() - 1;
    for (std::size_t a = 0; a < attempts; ++a) {
      RatVector t = perturb(l.random_member(rng), limit, d, static_cast<Offsets>(a % 3), rng);
      if (!full) t = complete_knapsack(std::move(t), *l.file().knapsack);
      const DistanceResult r = l.distance(t, p);
      if (r.dist_pow_p >= threshold) return {std::move(t), r.dist_pow_p, true, "perturbation"};
    }
  }

  if (full && l.has_code_formula()) {
    // d_1(2^k w, L) >= d_H(w, C_k), so bit vectors far from some C_k give far
    // lattice inputs; the oracle re-certifies each candidate.
    const auto& family = l.code_formula().family();
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (family[k].is_full()) continue;
      for (std::size_t a = 0; a < attempts; ++a) {
        BitVector w(l.n());
        for (auto& b : w) b = static_cast<std::uint8_t>(rng.below(2));
        RatVector t(l.n());
        for (std::size_t j = 0; j < l.n(); ++j) t[j] = Rational(static_cast<long>(w[j]) << k);
        const DistanceResult r = l.distance(t, p);
        if (r.dist_pow_p >= threshold) return {std::move(t), r.dist_pow_p, true, "scaled-codeword"};
      }
    }
  }

  if (!full) {
    RatVector t = far_instance_outside_span(l.basis(), eps, p, rng);
    // ||t_perp||_2 <= d_2(t, L) <= d_1(t, L).
    const Rational perp2 = project_to_span(l.basis(), t, 2).perp_pow_p;
    const Rational bound = p == 2 ? perp2 : sqrt_lower_bound(perp2);
    if (bound >= threshold) return {std::move(t), bound, false, "outside-span"};
  }

  throw GenerationFailed("no certified " + to_string(eps) + "-far input found");
}

CertifiedInput generate_close_input(const LatticeContext& l, const Rational& eps, int p, Rng& rng,
                                    std::size_t attempts) {
  const Rational threshold = far_threshold_pow(eps, p, l.n());
  if (sgn(eps) == 0) {
    RatVector t = l.random_member(rng);
    return {std::move(t), Rational(0), true, "member"};
  }
  const bool full = l.basis().full_rank();
  if (!full && !l.is_knapsack()) throw RankError("no exact distance oracle for this rank-deficient lattice");
  const std::size_t limit = full ? l.n() : l.n() - 1;
  for (std::size_t a = 0; a < attempts; ++a) {
    RatVector t = l.random_member(rng);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.below(limit));
    // Each of k moves has |delta|^p <= threshold / k and |delta| <= 1/2.
    Rational delta = threshold / static_cast<unsigned long>(k);
    if (p == 2) delta = sqrt_lower_bound(delta);
    delta = std::min(delta, Rational(1, 2));
    if (sgn(delta) == 0) continue;
    for (std::size_t moved = 0; moved < k; ++moved) {
      const auto j = static_cast<std::size_t>(rng.below(limit));
      t[j] += rng.below(2) == 0 ? delta : Rational(-delta);
    }
    if (!full) t = complete_knapsack(std::move(t), *l.file().knapsack);
    const DistanceResult r = l.distance(t, p);
    if (sgn(r.dist_pow_p) > 0 && r.dist_pow_p <= threshold) return {std::move(t), r.dist_pow_p, true, "close"};
  }
  throw GenerationFailed("no certified " + to_string(eps) + "-close input found");
}

std::string GridPoint::key() const {
  return "eps=" + lattest::to_string(eps) + ";s=" + lattest::to_string(s) + ";c=" + lattest::to_string(c) +
         ";eps1=" + lattest::to_string(eps1) + ";eps2=" + lattest::to_string(eps2) + ";p=" + std::to_string(p);
}

std::string to_string(InputKind k) {
  switch (k) {
    case InputKind::kMember: return "member";
    case InputKind::kFar: return "far";
    case InputKind::kClose: return "close";
    case InputKind::kFixed: return "fixed";
  }
  return "unknown";
}

InputKind input_kind_from_string(const std::string& s) {
  if (s == "member") return InputKind::kMember;
  if (s == "far") return InputKind::kFar;
  if (s == "close") return InputKind::kClose;
  if (s == "fixed") return InputKind::kFixed;
  throw ConfigError("unknown input kind '" + s + "' (member|far|close|fixed)");
}

std::vector<std::string> tester_ids() {
  return {"integer", "code-formula", "linear-code-formula", "tolerant-integer", "tolerant-code-formula",
          "knapsack", "lifted-knapsack"};
}

bool is_tolerant_tester(const std::string& id) { return id.rfind("tolerant-", 0) == 0; }

TesterPtr make_tester(const LatticeContext& l, const std::string& id, const GridPoint& g) {
  try {
    return build_tester(l, id, g);
  } catch (const InvalidInput& e) {
    throw ConfigError("cannot build " + id + " tester: " + e.what());
  }
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<TrialAggregate> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
  if (cfg.grid.empty()) throw ConfigError("parameter grid is empty");
  if (cfg.inputs == InputKind::kFixed && !cfg.fixed_input) throw ConfigError("fixed input kind needs an input vector");
  const LatticeContext ctx(cfg.lattice, cfg.coset_cap);
  if (cfg.fixed_input && cfg.fixed_input->size() != ctx.n()) throw ConfigError("input length differs from lattice dim");

  std::ofstream jsonl;
  if (!cfg.jsonl_path.empty()) {
    if (cfg.jsonl_path.has_parent_path()) std::filesystem::create_directories(cfg.jsonl_path.parent_path());
    jsonl.open(cfg.jsonl_path);
    if (!jsonl) throw ConfigError("cannot write " + cfg.jsonl_path.string());
  }

  std::vector<TrialAggregate> out;
  for (std::size_t c = 0; c < cfg.grid.size(); ++c) {
    const GridPoint& g = cfg.grid[c];
    TrialAggregate agg;
    agg.cell = c;
    agg.params = g;
    agg.tester = cfg.tester;
    agg.inputs = cfg.inputs;
    const TesterPtr tester = make_tester(ctx, cfg.tester, g);
    agg.budget = tester->query_budget();
    const bool tolerant = is_tolerant_tester(cfg.tester);
    const Rational far_eps = tolerant ? g.eps2 : g.eps;
    const Rational close_eps = tolerant ? g.eps1 : g.eps;
    std::size_t total_queries = 0;
    try {
      for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t stream = trial_stream(c, trial);
        const Rng trial_rng(cfg.seed, stream);
        Rng input_rng = trial_rng.split(1);
        Rng run_rng = trial_rng.split(2);
        CertifiedInput in;
        switch (cfg.inputs) {
          case InputKind::kMember: in = {ctx.random_member(input_rng), Rational(0), true, "member"}; break;
          case InputKind::kFar: in = generate_far_input(ctx, far_eps, g.p, input_rng); break;
          case InputKind::kClose: in = generate_close_input(ctx, close_eps, g.p, input_rng); break;
          case InputKind::kFixed: in = {*cfg.fixed_input, Rational(-1), false, "fixed"}; break;
        }
        const TestOutcome o = execute(*tester, in.t, run_rng);
        if (o.accepted()) ++agg.accepts;
        total_queries += o.query_count;
        agg.max_queries = std::max(agg.max_queries, o.query_count);
        if (jsonl.is_open()) {
          io::Json row{{"seed", cfg.seed},
                       {"cell", c},
                       {"trial", trial},
                       {"stream", stream},
                       {"tester", cfg.tester},
                       {"params", g.key()},
                       {"input_kind", to_string(cfg.inputs)},
                       {"strategy", in.strategy},
                       {"input", io::to_json(in.t)},
                       {"verdict", o.accepted() ? "accept" : "reject"},
                       {"query_count", o.query_count}};
          if (cfg.inputs != InputKind::kFixed) {
            row["dist_pow_p"] = to_string(in.dist_pow_p);
            row["certificate"] = in.exact ? "exact" : "lower-bound";
          }
          if (cfg.record_queries) {
            io::Json idx = io::Json::array();
            for (const auto& q : o.transcript) idx.push_back(q.index + 1);
            row["queries"] = idx;
          }
          jsonl << row.dump() << '\n';
        }
        ++agg.trials;
      }
    } catch (const ResourceLimit& e) {
      agg.error = std::string("ResourceLimit: ") + e.what();
    } catch (const GenerationFailed& e) {
      agg.error = std::string("GenerationFailed: ") + e.what();
    }
    if (agg.trials > 0) {
      agg.accept_rate = Rational(static_cast<unsigned long>(agg.accepts), static_cast<unsigned long>(agg.trials));
      agg.accept_rate.canonicalize();
      agg.mean_queries = static_cast<double>(total_queries) / static_cast<double>(agg.trials);
    }
    agg.wilson = wilson_interval(agg.accepts, agg.trials);
    out.push_back(std::move(agg));
  }

  if (!cfg.csv_path.empty()) {
    if (cfg.csv_path.has_parent_path()) std::filesystem::create_directories(cfg.csv_path.parent_path());
    std::ofstream csv(cfg.csv_path);
    if (!csv) throw ConfigError("cannot write " + cfg.csv_path.string());
    csv << kCsvHeaderComment << '\n' << csv_header() << '\n';
    for (const auto& a : out) csv << csv_row(a, cfg.seed) << '\n';
  }
  return out;
}

std::string csv_header() {
  return "seed,cell,tester,input,eps,s,c,eps1,eps2,p,trials,accepts,accept_rate,wilson_low,wilson_high,"
         "mean_queries,max_queries,budget,error";
}

std::string csv_row(const TrialAggregate& a, std::uint64_t seed) {
  std::ostringstream os;
  const GridPoint& g = a.params;
  os << seed << ',' << a.cell << ',' << a.tester << ',' << to_string(a.inputs) << ',' << to_string(g.eps) << ','
     << to_string(g.s) << ',' << to_string(g.c) << ',' << to_string(g.eps1) << ',' << to_string(g.eps2) << ',' << g.p
     << ',' << a.trials << ',' << a.accepts << ',' << to_string(a.accept_rate) << ','
     << format_double(a.wilson.first) << ',' << format_double(a.wilson.second) << ','
     << format_double(a.mean_queries) << ',' << a.max_queries << ',' << a.budget << ',' << csv_quote(a.error);
  return os.str();
}

std::vector<TrialAggregate> read_aggregates_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  std::vector<TrialAggregate> out;
  bool header_seen = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      if (!header_seen) {
        if (line != csv_header()) throw ConfigError("unexpected aggregate CSV header in " + path.string());
        header_seen = true;
        continue;
      }
      const auto f = split_csv_line(line);
      if (f.size() != 19) throw ConfigError("malformed aggregate CSV row: " + line);
      TrialAggregate a;
      a.cell = std::stoul(f[1]);
      a.tester = f[2];
      a.inputs = input_kind_from_string(f[3]);
      a.params.eps = parse_rational(f[4]);
      a.params.s = parse_rational(f[5]);
      a.params.c = parse_rational(f[6]);
      a.params.eps1 = parse_rational(f[7]);
      a.params.eps2 = parse_rational(f[8]);
      a.params.p = std::stoi(f[9]);
      a.trials = std::stoul(f[10]);
      a.accepts = std::stoul(f[11]);
      a.accept_rate = parse_rational(f[12]);
      a.wilson = {std::stod(f[13]), std::stod(f[14])};
      a.mean_queries = std::stod(f[15]);
      a.max_queries = std::stoul(f[16]);
      a.budget = std::stoul(f[17]);
      a.error = f[18];
      out.push_back(std::move(a));
    }
  } catch (const std::logic_error& e) {  // stoul / stod failures
    throw ConfigError("malformed aggregate CSV " + path.string() + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError("malformed aggregate CSV " + path.string() + ": " + e.what());
  }
  return out;
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

void write_chart(const std::filesystem::path& file, const std::string& title, const std::string& y_label,
                 const std::vector<Series>& series, const std::string& data_comment) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  double x_min = 1e300, x_max = -1e300, y_min = 0, y_max = 1e-12;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  y_max *= 1.05;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - y_min) / (y_max - y_min) * (kH - kTop - kBottom); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<!-- data\n" << data_comment << "-->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(y_min) << "\" x2=\"" << kW - kRight << "\" y2=\"" << py(y_min)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(y_min) << "\" x2=\"" << kLeft << "\" y2=\"" << kTop
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y_min + (y_max - y_min) * i / 4, x = x_min + (x_max - x_min) * i / 4;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << format_double(std::round(y * 1000) / 1000) << "</text>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << kH - kBottom + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << format_double(std::round(x * 10000) / 10000) << "</text>\n";
  }
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 22 << "\" text-anchor=\"middle\" font-size=\"12\">eps</text>\n";
  out << "<text x=\"16\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 16 " << kH / 2
      << ")\" text-anchor=\"middle\" font-size=\"12\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[k].points) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : series[k].points) {
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    }
    out << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 * (k + 1) << "\" font-size=\"11\" fill=\"" << color
        << "\">" << series[k].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::vector<TrialAggregate>& aggregates,
                                              const std::filesystem::path& dir) {
  if (aggregates.empty()) throw InvalidInput("emit_plots needs at least one aggregate");
  std::filesystem::create_directories(dir);
  std::map<std::string, Series> rate, queries;
  std::ostringstream data;
  data << "tester,input,eps,accept_rate,mean_queries\n";
  for (const auto& a : aggregates) {
    if (a.trials == 0) continue;
    const std::string label = a.tester + " (" + to_string(a.inputs) + ")";
    const double x = a.params.eps.get_d();
    rate[label].label = label;
    rate[label].points.emplace_back(x, a.accept_rate.get_d());
    queries[label].label = label;
    queries[label].points.emplace_back(x, a.mean_queries);
    data << a.tester << ',' << to_string(a.inputs) << ',' << to_string(a.params.eps) << ','
         << to_string(a.accept_rate) << ',' << format_double(a.mean_queries) << '\n';
  }
  auto flatten = [](std::map<std::string, Series>& m) {
    std::vector<Series> out;
    for (auto& [k, s] : m) {
      std::stable_sort(s.points.begin(), s.points.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(s);
    }
    return out;
  };
  const auto rate_file = dir / "accept_rate_vs_eps.svg";
  const auto query_file = dir / "queries_vs_eps.svg";
  write_chart(rate_file, "Acceptance rate vs eps", "accept rate", flatten(rate), data.str());
  write_chart(query_file, "Mean queries vs eps", "mean queries", flatten(queries), data.str());
  return {rate_file, query_file};
}

}  // namespace lattest
