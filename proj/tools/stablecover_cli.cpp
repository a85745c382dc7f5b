// Command-line entry point: instance generation, solving, oracles, cycle
// sparsification, and shared-randomness audits with fully reproducible
// seeds.  Every artifact embeds the resolved configuration; nothing reads
// wall-clock entropy.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablecover/audit.hpp"
#include "stablecover/fvs.hpp"
#include "stablecover/instance.hpp"
#include "stablecover/lp_core.hpp"
#include "stablecover/metrics.hpp"
#include "stablecover/set_cover_greedy.hpp"
#include "stablecover/set_cover_lp.hpp"
#include "stablecover/set_cover_naive.hpp"
#include "stablecover/vertex_cover.hpp"

namespace sc = stablecover;
using nlohmann::json;

namespace {

struct Options {
  std::string alg;
  std::string instance_path;
  std::string problem;
  std::string type = "graph";
  std::string out_path;
  std::string format = "json";
  std::string dist = "uniform";
  std::uint64_t seed = 0;
  int trials = 1000;
  int jobs = 1;
  double epsilon = 0.5;
  int k_param = 0;
  int m_param = 0;
  double constant_c = 3.0;
  double constant_t = 12.0;
  int n = 10;
  int m = 10;
  double p = 0.5;
  int s = 3;
  int f = 3;
  double dist_a = 0.5;
  double dist_b = 2.0;
  double dist_rate = 1.0;
  long long z_const = 100;
  bool approx = false;
  bool error_json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sc::ParseError("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifact(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(opt.out_path);
  if (!out) throw std::runtime_error("cannot write " + opt.out_path);
  out << text;
}

json config_echo(const Options& opt) {
  json j;
  j["seed"] = opt.seed;
  j["epsilon"] = opt.epsilon;
  j["constant_C"] = opt.constant_c;
  j["constant_t"] = opt.constant_t;
  if (opt.k_param > 0) j["K"] = opt.k_param;
  if (opt.m_param > 0) j["M"] = opt.m_param;
  j["trials"] = opt.trials;
  j["jobs"] = opt.jobs;
  return j;
}

sc::GeneratorConfig generator_config(const Options& opt) {
  sc::GeneratorConfig cfg;
  cfg.seed = opt.seed;
  cfg.n = opt.n;
  cfg.m = opt.m;
  cfg.p = opt.p;
  cfg.s = opt.s;
  cfg.f = opt.f;
  if (opt.dist == "uniform") {
    cfg.wdist.kind = sc::WeightDist::Kind::kUniform;
    cfg.wdist.a = opt.dist_a;
    cfg.wdist.b = opt.dist_b;
  } else if (opt.dist == "exponential") {
    cfg.wdist.kind = sc::WeightDist::Kind::kExponential;
    cfg.wdist.rate = opt.dist_rate;
  } else {
    throw sc::ConfigError("unknown weight distribution: " + opt.dist);
  }
  return cfg;
}

bool needs_graph(const std::string& alg) {
  return alg == "vertex-cover" || alg == "fvs" ||
         alg.rfind("baseline:", 0) == 0;
}

// Builds the audit adapter for --alg, loading the right instance kind.
struct LoadedAlgorithm {
  sc::AuditAlgorithm alg;
  std::vector<double> weights;
  std::optional<sc::WeightedGraph> graph;
  std::optional<sc::SetSystem> system;
};

sc::OptEstimator quick_opt_estimator(const sc::WeightedGraph& g,
                                     const std::string& problem) {
  if (problem == "fvs") {
    if (g.n > 20) {
      throw sc::ConfigError("baseline:fvs needs an oracle-sized instance");
    }
    return [g](const std::vector<double>& w) {
      sc::WeightedGraph h = g;
      h.weights = w;
      return sc::brute_opt_fvs(h).opt_value;
    };
  }
  return sc::vc_dual_opt_estimator(g);
}

LoadedAlgorithm load_algorithm(const Options& opt) {
  std::string alg_name = opt.alg;
  std::string base;
  if (alg_name.rfind("baseline:", 0) == 0) {
    base = alg_name.substr(9);
    alg_name = base;
  }
  const bool known = alg_name == "vertex-cover" || alg_name == "fvs" ||
                     alg_name == "naive-sc" || alg_name == "greedy-sc" ||
                     alg_name == "lp-sc";
  if (!known) {
    throw sc::ConfigError(
        "unknown algorithm: " + opt.alg +
        " (valid: vertex-cover, naive-sc, greedy-sc, lp-sc, fvs, "
        "baseline:<alg>)");
  }
  const std::string text = read_file(opt.instance_path);
  LoadedAlgorithm loaded;
  if (needs_graph(alg_name)) {
    loaded.graph = sc::parse_graph(text);
    loaded.weights = loaded.graph->weights;
    if (alg_name == "vertex-cover") {
      loaded.alg = sc::make_vertex_cover_algorithm(*loaded.graph);
    } else if (alg_name == "fvs") {
      loaded.alg = sc::make_fvs_algorithm(*loaded.graph, opt.epsilon,
                                          opt.constant_c, opt.constant_t);
    } else {
      throw sc::ConfigError("unknown algorithm: " + alg_name);
    }
  } else {
    loaded.system = sc::parse_set_system(text);
    loaded.weights = loaded.system->weights;
    if (alg_name == "naive-sc") {
      if (opt.epsilon > loaded.system->max_set_size()) {
        std::cerr << "note: epsilon clamped to s = "
                  << loaded.system->max_set_size() << "\n";
      }
      loaded.alg = sc::make_naive_sc_algorithm(*loaded.system, opt.epsilon);
    } else if (alg_name == "greedy-sc") {
      sc::GreedyParams params;
      if (opt.k_param > 0 && opt.m_param > 0) {
        params.K = opt.k_param;
        params.M = opt.m_param;
      } else {
        params = sc::GreedyParams::from_epsilon(
            opt.epsilon, loaded.system->max_set_size());
      }
      loaded.alg = sc::make_greedy_sc_algorithm(*loaded.system, params);
    } else if (alg_name == "lp-sc") {
      loaded.alg = sc::make_lp_sc_algorithm(*loaded.system, opt.epsilon,
                                            opt.constant_c);
    } else {
      throw sc::ConfigError("unknown algorithm: " + opt.alg +
                            " (valid: vertex-cover, naive-sc, greedy-sc, "
                            "lp-sc, fvs, baseline:<alg>)");
    }
  }
  if (!base.empty()) {
    if (!loaded.graph) {
      throw sc::ConfigError("baseline wrapper supports graph problems only");
    }
    // baseline:vertex-cover wraps the standard deterministic primal-dual
    // cover, the algorithm the naive rounding transformation is meant for.
    const auto inner = base == "vertex-cover"
                           ? sc::make_tight_vc_algorithm(*loaded.graph)
                           : loaded.alg;
    loaded.alg = sc::make_baseline_algorithm(
        inner, opt.epsilon,
        quick_opt_estimator(*loaded.graph, base == "fvs" ? "fvs" : "vc"));
  }
  return loaded;
}

int cmd_generate(const Options& opt) {
  const auto cfg = generator_config(opt);
  std::string text;
  if (opt.type == "graph") {
    text = sc::serialize_graph(sc::gen_graph(cfg));
  } else if (opt.type == "set-system") {
    text = sc::serialize_set_system(sc::gen_set_system(cfg));
  } else {
    throw sc::ConfigError("unknown instance type: " + opt.type);
  }
  write_artifact(opt, text);
  return 0;
}

int cmd_solve(const Options& opt) {
  const auto loaded = load_algorithm(opt);
  sc::RandomTape tape(opt.seed);
  json j;
  j["algorithm"] = opt.alg;
  j["instance"] = opt.instance_path;
  j["config"] = config_echo(opt);
  std::vector<int> selected;
  // LP-backed pipelines surface their solver telemetry in the artifact.
  if (opt.alg == "lp-sc") {
    const auto r = sc::lp_based_set_cover(*loaded.system, loaded.weights,
                                          opt.epsilon, tape, opt.constant_c);
    selected = r.selected;
    j["lambda"] = r.lambda;
    j["kappa"] = r.kappa;
    j["rounding_repetitions"] = r.k_rounds;
    j["lp_certified_gap"] = r.lp.certified_gap;
    j["lp_inner_iterations"] = r.lp.inner_iterations;
  } else if (opt.alg == "fvs") {
    const auto r =
        sc::feedback_vertex_set(*loaded.graph, loaded.weights, opt.epsilon,
                                tape, opt.constant_c, opt.constant_t);
    selected = r.selected;
    j["lambda"] = r.lambda;
    j["kappa"] = r.kappa;
    j["cut_iterations"] = r.cut_iterations;
    j["lp_certified_gap"] = r.certified_gap;
  } else {
    selected = loaded.alg.run(loaded.weights, tape);
  }
  double weight = 0;
  for (int id : selected) weight += loaded.weights[id];
  j["selected"] = selected;
  j["weight"] = weight;
  j["feasible"] = loaded.alg.feasible(selected);
  write_artifact(opt, j.dump(2));
  return 0;
}

int cmd_oracle(const Options& opt) {
  const std::string text = read_file(opt.instance_path);
  sc::OracleResult result;
  if (opt.problem == "vertex-cover") {
    result = sc::brute_opt_vertex_cover(sc::parse_graph(text));
  } else if (opt.problem == "set-cover") {
    result = sc::brute_opt_set_cover(sc::parse_set_system(text));
  } else if (opt.problem == "fvs") {
    result = sc::brute_opt_fvs(sc::parse_graph(text));
  } else {
    throw sc::ConfigError("unknown problem: " + opt.problem +
                          " (valid: vertex-cover, set-cover, fvs)");
  }
  json j;
  j["problem"] = opt.problem;
  j["instance"] = opt.instance_path;
  j["opt"] = result.opt_value;
  j["witness"] = result.witness;
  write_artifact(opt, j.dump(2));
  return 0;
}

int cmd_sparsify(const Options& opt) {
  const auto g = sc::parse_graph(read_file(opt.instance_path));
  std::vector<long long> z(g.n, opt.z_const);
  std::vector<double> zd(g.n, static_cast<double>(opt.z_const));
  const auto girths = sc::girth_table(g, zd);
  std::vector<double> ell = girths.g;
  for (double& l : ell) {
    if (std::isinf(l)) l = 1e18;  // vertices on no cycle sample sparsely
  }
  const sc::RandomTape tape(opt.seed);
  const auto out =
      sc::cycle_sparsify(g, z, ell, opt.epsilon, tape, opt.constant_t);
  json j;
  j["instance"] = opt.instance_path;
  j["config"] = config_echo(opt);
  j["z"] = opt.z_const;
  j["t"] = out.t;
  j["p"] = out.p;
  j["z_tilde"] = out.z_tilde;
  j["girth"] = girths.g;
  write_artifact(opt, j.dump(2));
  return 0;
}

int cmd_audit(const Options& opt) {
  const auto loaded = load_algorithm(opt);
  const auto probes = sc::default_perturbations(loaded.weights);
  auto report =
      sc::audit_lipschitz(loaded.alg, loaded.weights, probes, opt.trials,
                          opt.seed, opt.jobs, opt.instance_path);
  if (opt.approx) {
    double opt_value = 0;
    if (loaded.graph) {
      opt_value = opt.alg == "fvs"
                      ? sc::brute_opt_fvs(*loaded.graph).opt_value
                      : sc::brute_opt_vertex_cover(*loaded.graph).opt_value;
    } else {
      opt_value = sc::brute_opt_set_cover(*loaded.system).opt_value;
    }
    const auto approx =
        sc::audit_approximation(loaded.alg, loaded.weights, opt_value,
                                opt.trials, opt.seed, opt.jobs,
                                opt.instance_path);
    report.approx_mean = approx.approx_mean;
    report.approx_stderr = approx.approx_stderr;
    report.opt_value = approx.opt_value;
    report.feasibility_rate = approx.feasibility_rate;
  }
  if (opt.format == "csv") {
    write_artifact(opt, report.to_csv());
  } else if (opt.format == "json") {
    auto j = report.to_json();
    j["config"] = config_echo(opt);
    write_artifact(opt, j.dump(2));
  } else {
    throw sc::ConfigError("unknown format: " + opt.format);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz-continuous covering algorithms"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--error-json", opt.error_json,
               "emit machine-readable errors on stdout");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "random tape seed");
    cmd->add_option("--out", opt.out_path, "output path (default stdout)");
  };
  auto add_alg = [&](CLI::App* cmd) {
    cmd->add_option("--alg", opt.alg,
                    "vertex-cover | naive-sc | greedy-sc | lp-sc | fvs | "
                    "baseline:<alg>")
        ->required();
    cmd->add_option("--instance", opt.instance_path, "instance JSON file")
        ->required();
    cmd->add_option("--epsilon", opt.epsilon, "accuracy parameter");
    cmd->add_option("--K", opt.k_param, "greedy window parameter");
    cmd->add_option("--M", opt.m_param, "greedy rounding resolution");
    cmd->add_option("--constant-C", opt.constant_c, "LP pipeline constant");
    cmd->add_option("--constant-t", opt.constant_t,
                    "sparsifier repetition constant");
  };

  auto* gen = app.add_subcommand("generate", "generate a random instance");
  gen->add_option("--type", opt.type, "graph | set-system");
  gen->add_option("--n", opt.n, "vertices / elements");
  gen->add_option("--m", opt.m, "sets");
  gen->add_option("--p", opt.p, "edge probability");
  gen->add_option("--s", opt.s, "max set size");
  gen->add_option("--f", opt.f, "max element frequency");
  gen->add_option("--dist", opt.dist, "uniform | exponential");
  gen->add_option("--a", opt.dist_a, "uniform lower bound");
  gen->add_option("--b", opt.dist_b, "uniform upper bound");
  gen->add_option("--rate", opt.dist_rate, "exponential rate");
  add_common(gen);

  auto* solve = app.add_subcommand("solve", "run one algorithm once");
  add_alg(solve);
  add_common(solve);

  auto* oracle = app.add_subcommand("oracle", "exact brute-force optimum");
  oracle->add_option("--problem", opt.problem,
                     "vertex-cover | set-cover | fvs")
      ->required();
  oracle->add_option("--instance", opt.instance_path, "instance JSON file")
      ->required();
  add_common(oracle);

  auto* sparsify = app.add_subcommand("sparsify", "cycle sparsification");
  sparsify->add_option("--instance", opt.instance_path, "graph JSON file")
      ->required();
  sparsify->add_option("--z", opt.z_const, "integer vertex weight");
  sparsify->add_option("--epsilon", opt.epsilon, "sparsifier quality");
  sparsify->add_option("--constant-t", opt.constant_t,
                       "repetition constant");
  add_common(sparsify);

  auto* audit = app.add_subcommand("audit", "shared-randomness audit");
  add_alg(audit);
  audit->add_option("--trials", opt.trials, "seeds per probe");
  audit->add_option("--jobs", opt.jobs, "worker threads");
  audit->add_option("--format", opt.format, "json | csv");
  audit->add_flag("--approx", opt.approx,
                  "also measure approximation ratio against the oracle");
  add_common(audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(opt);
    if (solve->parsed()) return cmd_solve(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (sparsify->parsed()) return cmd_sparsify(opt);
    if (audit->parsed()) return cmd_audit(opt);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const sc::ConfigError& e) {
    if (opt.error_json) {
      std::cout << json{{"error", e.what()}, {"type", "config"}}.dump()
                << "\n";
    }
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sc::ParseError& e) {
    if (opt.error_json) {
      std::cout << json{{"error", e.what()}, {"type", "parse"}}.dump()
                << "\n";
    }
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const sc::ValidationError& e) {
    if (opt.error_json) {
      std::cout << json{{"error", e.what()}, {"type", "validation"}}.dump()
                << "\n";
    }
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    if (opt.error_json) {
      std::cout << json{{"error", e.what()}, {"type", "runtime"}}.dump()
                << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
