// Command-line front end: lattice construction, single tests, sweeps, exact
// oracles, dual witnesses, the linear-test reductions and plotting.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "lattest/errors.hpp"
#include "lattest/harness.hpp"
#include "lattest/io.hpp"
#include "lattest/lineartest.hpp"
#include "lattest/testers.hpp"

namespace fs = std::filesystem;
using lattest::ConfigError;
using lattest::Rational;
using lattest::RatVector;
namespace io = lattest::io;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

lattest::IntVector to_integers(const RatVector& x) {
  lattest::IntVector out;
  for (const auto& v : x) {
    if (!lattest::is_integer(v) || !v.get_num().fits_slong_p()) throw ConfigError("expected an integral input");
    out.push_back(v.get_num().get_si());
  }
  return out;
}

struct Globals {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::string out_dir = ".";
  std::string format = "json";
};

void emit(const io::Json& j, const std::string& path = "") {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    io::write_json_file(path, j);
  }
}

io::LatticeFile load_lattice(const std::string& path) {
  if (path.empty()) throw ConfigError("--lattice is required");
  return io::lattice_from_json(io::read_json_file(path));
}

// An input file is either a bare array or {"t": [...]}.
RatVector load_input(const std::string& path) {
  const io::Json j = io::read_json_file(path);
  return io::vector_from_json(j.is_object() ? j.at("t") : j);
}

Rational parse_one(const std::string& s, const char* name) {
  const RatVector v = io::parse_rational_list(s);
  if (v.size() != 1) throw ConfigError(std::string("--") + name + " expects one rational");
  return v.front();
}

std::string default_tester(const io::LatticeFile& f, bool tolerant) {
  if (!f.rm_degrees.empty()) return tolerant ? "tolerant-code-formula" : "code-formula";
  if (f.knapsack) return "lifted-knapsack";
  return tolerant ? "tolerant-integer" : "integer";
}

void print_aggregates(const std::vector<lattest::TrialAggregate>& aggs, const Globals& g) {
  if (g.format == "csv") {
    std::cout << lattest::kCsvHeaderComment << '\n' << lattest::csv_header() << '\n';
    for (const auto& a : aggs) std::cout << lattest::csv_row(a, g.seed) << '\n';
    return;
  }
  io::Json arr = io::Json::array();
  for (const auto& a : aggs) {
    arr.push_back(io::Json{{"cell", a.cell},
                           {"tester", a.tester},
                           {"input", lattest::to_string(a.inputs)},
                           {"params", a.params.key()},
                           {"trials", a.trials},
                           {"accepts", a.accepts},
                           {"accept_rate", lattest::to_string(a.accept_rate)},
                           {"wilson99", {a.wilson.first, a.wilson.second}},
                           {"mean_queries", a.mean_queries},
                           {"max_queries", a.max_queries},
                           {"budget", a.budget},
                           {"error", a.error}});
  }
  std::cout << arr.dump(2) << '\n';
}

struct RunOptions {
  std::string lattice, tester, input, inputs = "far";
  std::vector<std::string> eps{"1/4"}, s{"1/3"}, c{"1/3"}, eps1{"0"}, eps2{"1/4"};
  std::vector<int> p{1};
  bool no_queries = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool tolerant, bool lists) {
  cmd->add_option("--lattice", o.lattice, "lattice JSON file")->required();
  cmd->add_option("--tester", o.tester, "tester id (default chosen from the lattice kind)");
  cmd->add_option("--input", o.input, "fixed input vector JSON file");
  cmd->add_option("--inputs", o.inputs, "generated inputs: member | far | close");
  cmd->add_flag("--no-queries", o.no_queries, "omit transcripts from JSONL rows");
  auto add = [&](const char* name, std::vector<std::string>& v, const char* help) {
    auto* opt = cmd->add_option(name, v, help)->default_str(v.front());
    if (lists) opt->delimiter(',');
  };
  if (tolerant) {
    add("--eps1", o.eps1, "closeness parameter");
    add("--eps2", o.eps2, "farness parameter");
    add("--c", o.c, "completeness error");
  } else {
    add("--eps", o.eps, "farness parameter");
  }
  add("--s", o.s, "soundness error");
  auto* p = cmd->add_option("--p", o.p, "norm index (1 or 2)")->default_str("1");
  if (lists) p->delimiter(',');
}

std::vector<lattest::GridPoint> make_grid(const RunOptions& o) {
  std::vector<lattest::GridPoint> grid;
  for (const auto& e : o.eps)
    for (const auto& s : o.s)
      for (const auto& c : o.c)
        for (const auto& e1 : o.eps1)
          for (const auto& e2 : o.eps2)
            for (int p : o.p) {
              lattest::GridPoint g;
              g.eps = parse_one(e, "eps");
              g.s = parse_one(s, "s");
              g.c = parse_one(c, "c");
              g.eps1 = parse_one(e1, "eps1");
              g.eps2 = parse_one(e2, "eps2");
              g.p = p;
              grid.push_back(g);
            }
  return grid;
}

lattest::ExperimentConfig make_config(const RunOptions& o, const Globals& g, bool tolerant, const std::string& stem) {
  lattest::ExperimentConfig cfg;
  cfg.lattice = load_lattice(o.lattice);
  cfg.tester = o.tester.empty() ? default_tester(cfg.lattice, tolerant) : o.tester;
  cfg.grid = make_grid(o);
  cfg.trials = g.trials;
  cfg.seed = g.seed;
  cfg.record_queries = !o.no_queries;
  if (!o.input.empty()) {
    cfg.inputs = lattest::InputKind::kFixed;
    cfg.fixed_input = load_input(o.input);
  } else {
    cfg.inputs = lattest::input_kind_from_string(o.inputs);
  }
  cfg.jsonl_path = fs::path(g.out_dir) / (stem + "_trials.jsonl");
  cfg.csv_path = fs::path(g.out_dir) / (stem + "_aggregate.csv");
  return cfg;
}

// A single run on a fixed input prints the transcript; everything else goes
// through the experiment runner.
int run_test(const RunOptions& o, const Globals& g, bool tolerant, const std::string& stem) {
  lattest::ExperimentConfig cfg = make_config(o, g, tolerant, stem);
  if (cfg.inputs == lattest::InputKind::kFixed && g.trials == 1 && cfg.grid.size() == 1) {
    const lattest::LatticeContext ctx(cfg.lattice);
    const auto tester = lattest::make_tester(ctx, cfg.tester, cfg.grid.front());
    lattest::Rng rng(g.seed, lattest::trial_stream(0, 0));
    lattest::Rng run_rng = rng.split(2);
    const auto outcome = lattest::execute(*tester, *cfg.fixed_input, run_rng);
    io::Json j = io::to_json(outcome);
    j["tester"] = cfg.tester;
    j["seed"] = g.seed;
    emit(j);
    return 0;
  }
  print_aggregates(lattest::run_experiment(cfg), g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local membership testers for integer lattices"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed")->default_str("0");
  app.add_option("--trials", g.trials, "trials per grid cell")->default_str("1")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "directory for JSONL, CSV and SVG output")->default_str(".");
  app.add_option("--format", g.format, "aggregate output format")->check(CLI::IsMember({"json", "csv"}));

  // construct
  auto* construct = app.add_subcommand("construct", "build a lattice file");
  std::string rm_family, knapsack, out_file;
  int r = -1, height = -1;
  std::size_t integer_n = 0;
  construct->add_option("--rm-family", rm_family, "RM degrees per level, e.g. 1,2");
  construct->add_option("--r", r, "number of RM variables (n = 2^r)");
  construct->add_option("--height", height, "expected number of levels");
  construct->add_option("--integer", integer_n, "build Z^n");
  construct->add_option("--knapsack", knapsack, "knapsack coefficients a_1,...,a_{n-1}");
  construct->add_option("-o,--output", out_file, "output file (default stdout)");

  // test / tolerant-test / sweep
  RunOptions test_opts, tol_opts, sweep_opts;
  auto* test = app.add_subcommand("test", "run a 1-sided tester");
  add_run_options(test, test_opts, false, false);
  auto* tolerant = app.add_subcommand("tolerant-test", "run a tolerant tester");
  add_run_options(tolerant, tol_opts, true, false);
  tol_opts.inputs = "close";
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and plot it");
  add_run_options(sweep, sweep_opts, false, true);
  sweep->add_option("--eps1", sweep_opts.eps1)->delimiter(',');
  sweep->add_option("--eps2", sweep_opts.eps2)->delimiter(',');
  sweep->add_option("--c", sweep_opts.c)->delimiter(',');

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact distance or shortest vector");
  std::string oracle_lattice, oracle_input, oracle_t;
  int oracle_p = 1;
  bool shortest = false;
  oracle->add_option("--lattice", oracle_lattice)->required();
  oracle->add_option("--input", oracle_input, "input vector JSON file");
  oracle->add_option("--t", oracle_t, "input vector as comma-separated rationals");
  oracle->add_option("--p", oracle_p)->default_str("1");
  oracle->add_flag("--shortest", shortest, "shortest nonzero vector instead of a distance");

  // dual-witness
  auto* dual = app.add_subcommand("dual-witness", "dual vector certifying non-membership on J");
  std::string dual_lattice, dual_coords, dual_values;
  dual->add_option("--lattice", dual_lattice)->required();
  dual->add_option("--coords", dual_coords, "1-based coordinates")->required();
  dual->add_option("--values", dual_values, "values on those coordinates")->required();

  // transform
  auto* transform = app.add_subcommand("transform", "apply the linear-test reductions to a tree distribution");
  std::string pipeline = "2sided,nonadaptive,integer,real", tree_file, tr_lattice, tr_input, tr_eps = "1/4",
              tr_s = "1/3";
  int tr_p = 1;
  transform->add_option("--pipeline", pipeline, "stages among 2sided,nonadaptive,integer,real");
  transform->add_option("--tree", tree_file, "tree distribution JSON")->required();
  transform->add_option("--lattice", tr_lattice)->required();
  transform->add_option("--input", tr_input, "input to evaluate");
  transform->add_option("--eps", tr_eps, "eps for the real-input stage");
  transform->add_option("--s", tr_s, "s for the real-input stage");
  transform->add_option("--p", tr_p);

  // plot
  auto* plot = app.add_subcommand("plot", "SVG charts from an aggregate CSV");
  std::string plot_csv;
  plot->add_option("--csv", plot_csv, "aggregate CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*construct) {
      io::LatticeFile f;
      if (!rm_family.empty()) {
        if (r < 1) throw ConfigError("--rm-family needs --r");
        const auto degrees = io::parse_int_list(rm_family);
        if (height >= 0 && static_cast<std::size_t>(height) != degrees.size()) {
          throw ConfigError("--height does not match the number of RM degrees");
        }
        f = io::rm_lattice_file(degrees, r);
      } else if (integer_n > 0) {
        f = io::integer_lattice_file(integer_n);
      } else if (!knapsack.empty()) {
        std::vector<long> a;
        for (int v : io::parse_int_list(knapsack)) a.push_back(v);
        f = io::knapsack_lattice_file(a);
      } else {
        throw ConfigError("construct needs --rm-family, --integer or --knapsack");
      }
      emit(io::to_json(f), out_file);
    } else if (*test) {
      return run_test(test_opts, g, false, "test");
    } else if (*tolerant) {
      return run_test(tol_opts, g, true, "tolerant");
    } else if (*sweep) {
      lattest::ExperimentConfig cfg = make_config(sweep_opts, g, false, "sweep");
      const auto aggs = lattest::run_experiment(cfg);
      lattest::emit_plots(aggs, g.out_dir);
      print_aggregates(aggs, g);
    } else if (*oracle) {
      const lattest::LatticeContext ctx(load_lattice(oracle_lattice));
      if (shortest) {
        emit(io::to_json(lattest::shortest_vector(*ctx.modulus(), oracle_p)));
      } else {
        const RatVector t = !oracle_input.empty() ? load_input(oracle_input) : io::parse_rational_list(oracle_t);
        if (t.size() != ctx.n()) throw ConfigError("input length differs from lattice dim");
        emit(io::to_json(ctx.distance(t, oracle_p)));
      }
    } else if (*dual) {
      const auto f = load_lattice(dual_lattice);
      lattest::DualWitnessQuery q{io::parse_index_list(dual_coords), io::parse_rational_list(dual_values)};
      if (q.coords.size() != q.values.size()) throw ConfigError("--coords and --values differ in length");
      const auto w = lattest::dual_witness(f.basis, q);
      emit(io::Json{{"witness", w ? io::to_json(*w) : io::Json(nullptr)}});
    } else if (*transform) {
      const lattest::LatticeContext ctx(load_lattice(tr_lattice));
      const auto source = io::trees_from_json(io::read_json_file(tree_file));
      const auto m = ctx.modulus();
      lattest::TreeDistribution current = source;
      lattest::TesterPtr tester;
      std::optional<RatVector> x;
      if (!tr_input.empty()) x = load_input(tr_input);
      io::Json stages = io::Json::array();
      bool bounded = true;  // still over {0, ..., d-1}^n
      for (const auto& stage : split_list(pipeline)) {
        io::Json info{{"stage", stage}};
        if (stage == "2sided") {
          if (!bounded || tester) throw ConfigError("2sided must come first");
          auto t = std::make_shared<lattest::AdaptiveLinearTester>(current, ctx.basis(), m);
          current = t->relabeled();
          tester = t;
          if (x && lattest::all_integral(*x)) {
            info["exact_acceptance"] = lattest::to_string(t->exact_acceptance(m->reduce(to_integers(*x))));
          }
        } else if (stage == "nonadaptive") {
          if (!bounded) throw ConfigError("nonadaptive must precede integer/real");
          auto t = std::make_shared<lattest::NonAdaptiveFromTrees>(current, ctx.basis(), m);
          tester = t;
          if (x && lattest::all_integral(*x)) {
            info["exact_acceptance"] = lattest::to_string(t->exact_acceptance(m->reduce(to_integers(*x))));
          }
        } else if (stage == "integer") {
          if (!tester) throw ConfigError("integer stage needs a preceding tester");
          tester = lattest::lift_bounded_to_integer(tester, *m);
          bounded = false;
        } else if (stage == "real") {
          if (!tester || bounded) throw ConfigError("real stage needs a preceding integer stage");
          tester = lattest::lift_integer_to_real(tester, parse_one(tr_eps, "eps"), parse_one(tr_s, "s"), tr_p);
        } else {
          throw ConfigError("unknown pipeline stage '" + stage + "'");
        }
        info["tester"] = tester->name();
        info["query_budget"] = tester->query_budget();
        stages.push_back(info);
      }
      io::Json out{{"stages", stages}};
      if (x && tester) {
        lattest::Rng rng(g.seed, 0);
        out["outcome"] = io::to_json(lattest::execute(*tester, *x, rng));
      }
      emit(out);
    } else if (*plot) {
      const auto aggs = lattest::read_aggregates_csv(plot_csv);
      io::Json files = io::Json::array();
      for (const auto& p : lattest::emit_plots(aggs, g.out_dir)) files.push_back(p.string());
      emit(io::Json{{"plots", files}});
    }
  } catch (const lattest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const lattest::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const lattest::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
