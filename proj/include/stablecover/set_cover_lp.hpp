#pragma once

// LP-based set cover: solve the doubly regularized relaxation with a stably
// sampled lambda in [L, 2L], then run independent inclusion rounds.  Keys are
// addressed by (round, set id) so coupled runs on perturbed weights consume
// identical randomness per logical decision.
//
// Tape keys: "lpsc/lambda/*", "rsc/k=<round>/S=<id>".

#include <algorithm>
#include <cmath>
#include <vector>

#include "stablecover/instance.hpp"
#include "stablecover/lp_core.hpp"
#include "stablecover/random_tape.hpp"

namespace stablecover {

struct LPSetCoverConfig {
  double epsilon = 0.5;
  double C = 3.0;  // the "large enough constant"; reported in artifacts

  // Derived parameters; log n is floored away from zero so tiny instances
  // stay well-defined.
  static double log_n(int n) { return std::log(std::max(n, 3)); }
  double L(double weight_sum, int m, int n) const {
    return epsilon * weight_sum / (C * m * log_n(n));
  }
  double kappa(int n) const { return epsilon / (C * log_n(n)); }
  int rounding_repetitions(int n) const {
    return static_cast<int>(std::ceil(C * log_n(n)));
  }
};

// K_rounds independent inclusion passes over the fractional solution.  An
// element is missed with probability at most exp(-K_rounds * coverage).
inline std::vector<int> rounding_sc(const SetSystem& sys,
                                    const std::vector<double>& x, int k_rounds,
                                    const RandomTape& tape) {
  std::vector<char> chosen(sys.sets.size(), 0);
  for (int round = 0; round < k_rounds; ++round) {
    for (std::size_t s = 0; s < sys.sets.size(); ++s) {
      if (chosen[s]) continue;  // membership is monotone across rounds
      TapeKey key("rsc/k=");
      key.append(round).append("/S=").append(static_cast<long long>(s));
      if (tape.uniform(key.view()) < x[s]) chosen[s] = 1;
    }
  }
  std::vector<int> out;
  for (std::size_t s = 0; s < chosen.size(); ++s) {
    if (chosen[s]) out.push_back(static_cast<int>(s));
  }
  return out;
}

struct LPSetCoverResult {
  std::vector<int> selected;
  double lambda = 0.0;
  double kappa = 0.0;
  int k_rounds = 0;
  LPSolution lp;
  bool degenerate_zero_weights = false;
};

inline LPSetCoverResult lp_based_set_cover(const SetSystem& sys,
                                           const std::vector<double>& w,
                                           double eps, const RandomTape& tape,
                                           double C = 3.0) {
  if (!sys.coverable()) {
    throw InfeasibleError("lp_based_set_cover: instance not coverable");
  }
  LPSetCoverConfig cfg;
  cfg.epsilon = eps;
  cfg.C = C;
  const int m = static_cast<int>(sys.sets.size());
  const int n = sys.n_elements;

  LPSetCoverResult result;
  double weight_sum = 0.0;
  for (double v : w) weight_sum += v;
  if (weight_sum == 0.0) {
    // The lambda interval collapses at ||w||_1 = 0; the full family is a
    // zero-cost cover.
    result.degenerate_zero_weights = true;
    result.selected.resize(m);
    for (int s = 0; s < m; ++s) result.selected[s] = s;
    return result;
  }

  const double l_low = cfg.L(weight_sum, m, n);
  result.lambda = sample_ratio(l_low, 2.0, tape, "lpsc/lambda");
  result.kappa = cfg.kappa(n);
  result.k_rounds = cfg.rounding_repetitions(n);

  CoveringProgram prog;
  prog.num_vars = m;
  prog.weights = w;
  prog.lambda = result.lambda;
  prog.kappa = result.kappa;
  prog.rows = sys.covering_sets();
  result.lp = solve_regularized(prog, prog.default_tol());
  result.selected = rounding_sc(sys, result.lp.x, result.k_rounds, tape);
  return result;
}

}  // namespace stablecover
