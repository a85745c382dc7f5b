#pragma once

// Empirical verification harness.  audit_lipschitz estimates the
// shared-randomness Lipschitz constant: for each admissible single-coordinate
// perturbation it couples runs on w and w + delta*1_coord through the same
// tape and averages d_w / delta over seeds; the reported estimate is the
// maximum over probed coordinates of the per-probe mean (matching the
// supremum in the definition, and a lower bound on the true constant since
// any finite probe set is).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stablecover/fvs.hpp"
#include "stablecover/instance.hpp"
#include "stablecover/metrics.hpp"
#include "stablecover/random_tape.hpp"
#include "stablecover/set_cover_greedy.hpp"
#include "stablecover/set_cover_lp.hpp"
#include "stablecover/set_cover_naive.hpp"
#include "stablecover/vertex_cover.hpp"

namespace stablecover {

// A deterministic-by-tape algorithm under audit.
struct AuditAlgorithm {
  std::string name;
  int dimension = 0;
  std::function<std::vector<int>(const std::vector<double>&,
                                 const RandomTape&)>
      run;
  std::function<bool(const std::vector<int>&)> feasible;
  std::function<double(const std::vector<int>&, const std::vector<double>&)>
      output_weight = [](const std::vector<int>& sel,
                         const std::vector<double>& w) {
        double s = 0;
        for (int v : sel) s += w[v];
        return s;
      };
};

// Admissible single-coordinate perturbation: either 0 < delta <= w_coord, or
// w_coord = 0 and delta > 0.
struct PerturbationSpec {
  int coord = 0;
  double delta = 0.0;
};

inline void check_admissible(const PerturbationSpec& spec,
                             const std::vector<double>& w) {
  if (!(spec.delta > 0.0)) {
    throw std::invalid_argument("perturbation: delta must be positive");
  }
  const double wv = w.at(spec.coord);
  if (wv > 0.0 && spec.delta > wv * (1 + 1e-12)) {
    throw std::invalid_argument(
        "perturbation: delta must not exceed the coordinate weight");
  }
}

// Coordinate sweep per the audit design: each coordinate at relative scales
// {1e-3, 1e-2, 1e-1} of max(w_v, w_max/n); zero-weight coordinates are probed
// from zero at the same magnitudes.
inline std::vector<PerturbationSpec> default_perturbations(
    const std::vector<double>& w) {
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, v);
  if (wmax == 0.0) wmax = 1.0;
  const double floor_scale = wmax / static_cast<double>(w.size());
  std::vector<PerturbationSpec> probes;
  for (int coord = 0; coord < static_cast<int>(w.size()); ++coord) {
    const double base = std::max(w[coord], floor_scale);
    for (double scale : {1e-3, 1e-2, 1e-1}) {
      double delta = scale * base;
      if (w[coord] > 0.0) delta = std::min(delta, w[coord]);
      probes.push_back({coord, delta});
    }
  }
  return probes;
}

struct ProbeStats {
  int coord = 0;
  double delta = 0.0;
  int trials = 0;
  double lip_mean = 0.0;
  double lip_stderr = 0.0;
  long long infeasible = 0;
};

struct AuditReport {
  std::string algorithm;
  std::string instance;
  std::uint64_t seed0 = 0;
  int trials = 0;
  std::vector<ProbeStats> probes;
  double lipschitz_estimate = 0.0;  // max over probes of the per-probe mean
  double lipschitz_stderr = 0.0;    // standard error of the maximizing probe
  double approx_mean = 0.0;
  double approx_stderr = 0.0;
  double opt_value = 0.0;
  double feasibility_rate = 1.0;
  long long infeasible_flagged = 0;

  std::string to_csv() const {
    std::string out =
        "algorithm,instance,coord,delta,trials,lip_mean,lip_stderr,"
        "approx_mean,feas_rate\n";
    char buf[320];
    auto row = [&](int coord, double delta, int n, double mean, double se) {
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.17g,%d,%.17g,%.17g,%.17g,%.17g\n",
                    algorithm.c_str(), instance.c_str(), coord, delta, n,
                    mean, se, approx_mean, feasibility_rate);
      out += buf;
    };
    for (const auto& p : probes) {
      row(p.coord, p.delta, p.trials, p.lip_mean, p.lip_stderr);
    }
    if (probes.empty()) row(-1, 0.0, trials, 0.0, 0.0);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["instance"] = instance;
    j["seed0"] = seed0;
    j["trials"] = trials;
    j["lipschitz_estimate"] = lipschitz_estimate;
    j["lipschitz_stderr"] = lipschitz_stderr;
    j["lipschitz_note"] =
        "empirical lower bound over the probed perturbations; the proven "
        "constant is an upper bound";
    j["approx_mean"] = approx_mean;
    j["approx_stderr"] = approx_stderr;
    j["opt_value"] = opt_value;
    j["feasibility_rate"] = feasibility_rate;
    j["infeasible_flagged"] = infeasible_flagged;
    auto& probes_json = j["probes"] = nlohmann::json::array();
    for (const auto& p : probes) {
      probes_json.push_back({{"coord", p.coord},
                             {"delta", p.delta},
                             {"trials", p.trials},
                             {"lip_mean", p.lip_mean},
                             {"lip_stderr", p.lip_stderr},
                             {"infeasible", p.infeasible}});
    }
    return j;
  }
};

namespace detail {

// Deterministic parallel map: results land in per-index slots, so the
// reduction is independent of thread scheduling.
template <typename Fn>
void parallel_for(int jobs, int count, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::atomic<int> next{0};
  for (int t = 0; t < jobs; ++t) {
    threads.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : threads) th.join();
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr summarize(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0;
  for (double x : xs) sum += x;
  out.mean = sum / xs.size();
  double var = 0;
  for (double x : xs) var += (x - out.mean) * (x - out.mean);
  if (xs.size() > 1) var /= (xs.size() - 1);
  out.stderr_ = std::sqrt(var / xs.size());
  return out;
}

}  // namespace detail

inline ProbeStats run_probe(const AuditAlgorithm& alg,
                            const std::vector<double>& w,
                            const PerturbationSpec& spec, int trials,
                            std::uint64_t seed0, int jobs) {
  check_admissible(spec, w);
  std::vector<double> w2 = w;
  w2[spec.coord] += spec.delta;

  std::vector<double> ratios(trials);
  std::vector<char> bad(trials, 0);
  detail::parallel_for(jobs, trials, [&](int i) {
    RandomTape tape(seed0 + static_cast<std::uint64_t>(i));
    const auto a = alg.run(w, tape);
    const auto b = alg.run(w2, tape);
    if (!alg.feasible(a) || !alg.feasible(b)) bad[i] = 1;
    ratios[i] = weighted_distance({a, w}, {b, w2}) / spec.delta;
  });

  ProbeStats stats;
  stats.coord = spec.coord;
  stats.delta = spec.delta;
  stats.trials = trials;
  const auto ms = detail::summarize(ratios);
  stats.lip_mean = ms.mean;
  stats.lip_stderr = ms.stderr_;
  for (char c : bad) stats.infeasible += c;
  return stats;
}

inline AuditReport audit_lipschitz(const AuditAlgorithm& alg,
                                   const std::vector<double>& w,
                                   const std::vector<PerturbationSpec>& probes,
                                   int trials, std::uint64_t seed0,
                                   int jobs = 1,
                                   const std::string& instance_id = "") {
  AuditReport report;
  report.algorithm = alg.name;
  report.instance = instance_id;
  report.seed0 = seed0;
  report.trials = trials;
  for (const auto& spec : probes) {
    report.probes.push_back(run_probe(alg, w, spec, trials, seed0, jobs));
    const auto& p = report.probes.back();
    report.infeasible_flagged += p.infeasible;
    if (p.lip_mean > report.lipschitz_estimate) {
      report.lipschitz_estimate = p.lip_mean;
      report.lipschitz_stderr = p.lip_stderr;
    }
  }
  return report;
}

inline AuditReport audit_approximation(const AuditAlgorithm& alg,
                                       const std::vector<double>& w,
                                       double opt_value, int trials,
                                       std::uint64_t seed0, int jobs = 1,
                                       const std::string& instance_id = "") {
  AuditReport report;
  report.algorithm = alg.name;
  report.instance = instance_id;
  report.seed0 = seed0;
  report.trials = trials;
  report.opt_value = opt_value;

  std::vector<double> weights(trials);
  std::vector<char> bad(trials, 0);
  detail::parallel_for(jobs, trials, [&](int i) {
    RandomTape tape(seed0 + static_cast<std::uint64_t>(i));
    const auto out = alg.run(w, tape);
    if (!alg.feasible(out)) bad[i] = 1;
    weights[i] = alg.output_weight(out, w);
  });
  long long infeasible = 0;
  for (char c : bad) infeasible += c;
  report.infeasible_flagged = infeasible;
  report.feasibility_rate =
      1.0 - static_cast<double>(infeasible) / std::max(trials, 1);
  auto ms = detail::summarize(weights);
  if (opt_value > 0.0) {
    report.approx_mean = ms.mean / opt_value;
    report.approx_stderr = ms.stderr_ / opt_value;
  } else {
    report.approx_mean = ms.mean;
    report.approx_stderr = ms.stderr_;
  }
  return report;
}

// Naive weight-rounding baseline: estimate OPT from the input weights, round
// every weight up to the randomly offset grid of pitch
// c = eps * opt_estimate(w) / dimension, and run the algorithm on the rounded
// weights.  Because the estimate moves with w, a perturbation shifts the
// whole grid, which is what makes this wrapper only O(|V|/eps)-Lipschitz.
using OptEstimator = std::function<double(const std::vector<double>&)>;

inline std::vector<int> baseline_wrapper(const AuditAlgorithm& alg,
                                         const std::vector<double>& w,
                                         double eps,
                                         const OptEstimator& opt_estimator,
                                         const RandomTape& tape) {
  if (!(eps > 0.0)) throw std::invalid_argument("baseline_wrapper: eps > 0");
  const double pitch =
      eps * opt_estimator(w) / std::max(1, alg.dimension);
  if (!(pitch > 0.0)) return alg.run(w, tape);
  const double offset = sample_fixed(0.0, 1.0, tape, "base/offset");
  std::vector<double> rounded(w.size());
  for (std::size_t v = 0; v < w.size(); ++v) {
    rounded[v] = pitch * (std::ceil(w[v] / pitch - offset) + offset);
  }
  return alg.run(rounded, tape);
}

// Cheap 2-approximation of the vertex cover optimum: twice the dual value.
inline OptEstimator vc_dual_opt_estimator(const WeightedGraph& g) {
  auto incidence =
      std::make_shared<std::vector<std::vector<int>>>(g.incidence());
  return [g, incidence](const std::vector<double>& w) {
    const auto duals = compute_duals(g, w, *incidence);
    double total = 0;
    for (double y : duals.y) total += y;
    return 2 * total;
  };
}

// The standard deterministic primal-dual cover, for use under the baseline
// wrapper.
inline AuditAlgorithm make_tight_vc_algorithm(const WeightedGraph& g) {
  AuditAlgorithm alg;
  alg.name = "tight-vc";
  alg.dimension = g.n;
  auto incidence =
      std::make_shared<std::vector<std::vector<int>>>(g.incidence());
  alg.run = [g, incidence](const std::vector<double>& w, const RandomTape&) {
    return tight_vertex_cover(g, w, *incidence);
  };
  alg.feasible = [g](const std::vector<int>& sel) {
    return is_vertex_cover(g, sel);
  };
  return alg;
}

// Exact minimum vertex cover as a deterministic algorithm (oracle-sized
// instances only); the canonical approximation-without-stability input for
// the baseline wrapper.
inline AuditAlgorithm make_exact_vc_algorithm(const WeightedGraph& g) {
  AuditAlgorithm alg;
  alg.name = "exact-vc";
  alg.dimension = g.n;
  alg.run = [g](const std::vector<double>& w, const RandomTape&) {
    WeightedGraph h = g;
    h.weights = w;
    return brute_opt_vertex_cover(h).witness;
  };
  alg.feasible = [g](const std::vector<int>& sel) {
    return is_vertex_cover(g, sel);
  };
  return alg;
}

// ---------------------------------------------------------------------------
// Algorithm adapters
// ---------------------------------------------------------------------------

inline AuditAlgorithm make_vertex_cover_algorithm(const WeightedGraph& g) {
  AuditAlgorithm alg;
  alg.name = "vertex-cover";
  alg.dimension = g.n;
  auto incidence =
      std::make_shared<std::vector<std::vector<int>>>(g.incidence());
  alg.run = [g, incidence](const std::vector<double>& w,
                           const RandomTape& tape) {
    return vertex_cover(g, w, tape, *incidence);
  };
  alg.feasible = [g](const std::vector<int>& sel) {
    return is_vertex_cover(g, sel);
  };
  return alg;
}

inline AuditAlgorithm make_naive_sc_algorithm(const SetSystem& sys,
                                              double eps) {
  AuditAlgorithm alg;
  alg.name = "naive-sc";
  alg.dimension = static_cast<int>(sys.sets.size());
  auto covering =
      std::make_shared<std::vector<std::vector<int>>>(sys.covering_sets());
  alg.run = [sys, eps, covering](const std::vector<double>& w,
                                 const RandomTape& tape) {
    return naive_set_cover(sys, w, eps, tape, *covering);
  };
  alg.feasible = [sys](const std::vector<int>& sel) {
    return is_set_cover(sys, sel);
  };
  return alg;
}

inline AuditAlgorithm make_greedy_sc_algorithm(const SetSystem& sys,
                                               const GreedyParams& params) {
  AuditAlgorithm alg;
  alg.name = "greedy-sc";
  alg.dimension = static_cast<int>(sys.sets.size());
  alg.run = [sys, params](const std::vector<double>& w,
                          const RandomTape& tape) {
    return lipschitz_greedy(sys, w, params, tape);
  };
  alg.feasible = [sys](const std::vector<int>& sel) {
    return is_set_cover(sys, sel);
  };
  return alg;
}

inline AuditAlgorithm make_lp_sc_algorithm(const SetSystem& sys, double eps,
                                           double C = 3.0) {
  AuditAlgorithm alg;
  alg.name = "lp-sc";
  alg.dimension = static_cast<int>(sys.sets.size());
  alg.run = [sys, eps, C](const std::vector<double>& w,
                          const RandomTape& tape) {
    return lp_based_set_cover(sys, w, eps, tape, C).selected;
  };
  alg.feasible = [sys](const std::vector<int>& sel) {
    return is_set_cover(sys, sel);
  };
  return alg;
}

// FVS runs the cutting-plane LP once per distinct weight vector; discovered
// cycle rows are memoized (they only seed the working set, the solution is
// the unique optimum either way).
inline AuditAlgorithm make_fvs_algorithm(const WeightedGraph& g, double eps,
                                         double C = 3.0, double c_t = 12.0) {
  AuditAlgorithm alg;
  alg.name = "fvs";
  alg.dimension = g.n;
  auto memo = std::make_shared<
      std::pair<std::mutex, std::map<std::vector<double>,
                                     std::vector<std::vector<int>>>>>();
  alg.run = [g, eps, C, c_t, memo](const std::vector<double>& w,
                                   const RandomTape& tape) {
    std::vector<std::vector<int>> hints;
    {
      std::lock_guard<std::mutex> lock(memo->first);
      auto it = memo->second.find(w);
      if (it != memo->second.end()) hints = it->second;
    }
    auto result = feedback_vertex_set(g, w, eps, tape, C, c_t, hints);
    if (hints.empty() && !result.rows.empty()) {
      std::lock_guard<std::mutex> lock(memo->first);
      memo->second.emplace(w, result.rows);
    }
    return result.selected;
  };
  alg.feasible = [g](const std::vector<int>& sel) {
    return is_feedback_vertex_set(g, sel);
  };
  return alg;
}

inline AuditAlgorithm make_baseline_algorithm(const AuditAlgorithm& inner,
                                              double eps,
                                              OptEstimator opt_estimator) {
  AuditAlgorithm alg = inner;
  alg.name = "baseline:" + inner.name;
  alg.run = [inner, eps, opt_estimator](const std::vector<double>& w,
                                        const RandomTape& tape) {
    return baseline_wrapper(inner, w, eps, opt_estimator, tape);
  };
  return alg;
}

}  // namespace stablecover
