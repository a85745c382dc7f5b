#pragma once

// Solver for the doubly regularized covering program
//
//   minimize  sum_S w_S x_S + (lambda/2) sum_S x_S^2 + (kappa/2) sum_S w_S x_S^2
//   subject to  sum_{S in row} x_S >= 1  for every row,  0 <= x_S <= 1.
//
// Accelerated projected gradient on an augmented-Lagrangian sequence for the
// row constraints; the box projection is exact.  Every returned solution
// carries a certified optimality gap computed against the closed-form
// Lagrangian dual at the current multipliers, which is valid by weak duality.
// Solves are deterministic: fixed iteration order, no randomness.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablecover/instance.hpp"

namespace stablecover {

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what, double gap)
      : std::runtime_error(what), achieved_gap(gap) {}
  double achieved_gap;
};

struct CoveringProgram {
  int num_vars = 0;
  std::vector<std::vector<int>> rows;
  std::vector<double> weights;
  double lambda = 1.0;  // > 0: uniqueness and the Lipschitz analysis need it
  double kappa = 0.0;   // >= 0

  void validate() const {
    if (num_vars < 0) throw ValidationError("covering program: num_vars < 0");
    if (static_cast<int>(weights.size()) != num_vars) {
      throw ValidationError("covering program: weight size mismatch");
    }
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ValidationError("covering program: weights must be >= 0");
      }
    }
    if (!(lambda > 0.0)) {
      throw ValidationError("covering program: lambda must be positive");
    }
    if (!(kappa >= 0.0)) {
      throw ValidationError("covering program: kappa must be >= 0");
    }
    for (const auto& row : rows) {
      if (row.empty()) throw ValidationError("covering program: empty row");
      for (int v : row) {
        if (v < 0 || v >= num_vars) {
          throw ValidationError("covering program: row var out of range");
        }
      }
    }
  }

  double default_tol() const { return std::min(1e-9, lambda * 1e-6); }
};

struct LPSolution {
  std::vector<double> x;
  double certified_gap = 0.0;
  double max_violation = 0.0;  // before the feasibility repair
  int outer_iterations = 0;
  long long inner_iterations = 0;
};

inline double objective_value(const CoveringProgram& prog,
                              const std::vector<double>& x) {
  double f = 0.0;
  for (int v = 0; v < prog.num_vars; ++v) {
    f += prog.weights[v] * x[v] + 0.5 * prog.lambda * x[v] * x[v] +
         0.5 * prog.kappa * prog.weights[v] * x[v] * x[v];
  }
  return f;
}

inline std::vector<double> objective_gradient(const CoveringProgram& prog,
                                              const std::vector<double>& x) {
  std::vector<double> g(prog.num_vars);
  for (int v = 0; v < prog.num_vars; ++v) {
    g[v] = prog.weights[v] + prog.lambda * x[v] +
           prog.kappa * prog.weights[v] * x[v];
  }
  return g;
}

namespace detail {

// Exact value of max_mu>=0 ... no: plain Lagrangian dual at fixed mu >= 0,
//   q(mu) = sum_r mu_r + sum_v min_{x in [0,1]} (w_v - colsum_v) x + c_v/2 x^2,
// a valid lower bound on the constrained optimum by weak duality.
inline double lagrangian_dual_value(const CoveringProgram& prog,
                                    const std::vector<double>& mu) {
  std::vector<double> colsum(prog.num_vars, 0.0);
  double q = 0.0;
  for (std::size_t r = 0; r < prog.rows.size(); ++r) {
    q += mu[r];
    for (int v : prog.rows[r]) colsum[v] += mu[r];
  }
  for (int v = 0; v < prog.num_vars; ++v) {
    const double a = prog.weights[v] - colsum[v];
    const double c = prog.lambda + prog.kappa * prog.weights[v];
    const double xv = std::clamp(-a / c, 0.0, 1.0);
    q += a * xv + 0.5 * c * xv * xv;
  }
  return q;
}

// Largest eigenvalue of A^T A for the 0/1 row-incidence matrix, by power
// iteration from the all-ones vector (deterministic).
inline double row_matrix_norm_sq(const CoveringProgram& prog) {
  if (prog.rows.empty() || prog.num_vars == 0) return 0.0;
  std::vector<double> x(prog.num_vars, 1.0), tmp(prog.rows.size());
  double norm = std::sqrt(static_cast<double>(prog.num_vars));
  for (double& e : x) e /= norm;
  double sigma = 1.0;
  for (int it = 0; it < 40; ++it) {
    for (std::size_t r = 0; r < prog.rows.size(); ++r) {
      double s = 0.0;
      for (int v : prog.rows[r]) s += x[v];
      tmp[r] = s;
    }
    std::vector<double> y(prog.num_vars, 0.0);
    for (std::size_t r = 0; r < prog.rows.size(); ++r) {
      for (int v : prog.rows[r]) y[v] += tmp[r];
    }
    double ynorm = 0.0;
    for (double e : y) ynorm += e * e;
    ynorm = std::sqrt(ynorm);
    if (ynorm == 0.0) return 1.0;
    sigma = ynorm;
    for (int v = 0; v < prog.num_vars; ++v) x[v] = y[v] / ynorm;
  }
  return sigma;
}

// Raise variables of deficient rows until every row sum reaches one.  The
// deficits are at the feasibility tolerance, so the objective perturbation is
// negligible and shows up in the certified gap anyway.
inline void repair_rows(const CoveringProgram& prog, std::vector<double>& x) {
  for (const auto& row : prog.rows) {
    double sum = 0.0;
    for (int v : row) sum += x[v];
    double deficit = 1.0 - sum;
    if (deficit <= 0.0) continue;
    for (int v : row) {
      const double room = 1.0 - x[v];
      const double add = std::min(room, deficit);
      x[v] += add;
      deficit -= add;
      if (deficit <= 0.0) break;
    }
  }
}

}  // namespace detail

inline LPSolution solve_regularized(const CoveringProgram& prog, double tol,
                                    std::vector<double> x0 = {}) {
  prog.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("solve_regularized: tol > 0");
  constexpr double kFeasTol = 1e-8;
  const int n = prog.num_vars;

  LPSolution sol;
  if (prog.rows.empty()) {
    // Unconstrained box minimum is coordinatewise closed form (0 for w >= 0).
    sol.x.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
      const double c = prog.lambda + prog.kappa * prog.weights[v];
      sol.x[v] = std::clamp(-prog.weights[v] / c, 0.0, 1.0);
    }
    return sol;
  }

  const std::size_t num_rows = prog.rows.size();
  double wmax = 0.0;
  for (double w : prog.weights) wmax = std::max(wmax, w);
  const double sigma_sq = detail::row_matrix_norm_sq(prog) * 1.05 + 1e-12;

  std::vector<double> x = std::move(x0);
  if (static_cast<int>(x.size()) != n) x.assign(n, 0.5);
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);

  std::vector<double> mu(num_rows, 0.0);
  double rho = std::max(prog.lambda, 0.1 * (1.0 + wmax));
  double best_q = -std::numeric_limits<double>::infinity();
  double prev_viol = std::numeric_limits<double>::infinity();

  std::vector<double> y = x, x_prev = x, grad(n), rowsum(num_rows);
  const long long max_total_inner = 400000;
  double last_gap = std::numeric_limits<double>::infinity();

  auto eval_rowsums = [&](const std::vector<double>& z) {
    for (std::size_t r = 0; r < num_rows; ++r) {
      double s = 0.0;
      for (int v : prog.rows[r]) s += z[v];
      rowsum[r] = s;
    }
  };

  for (int outer = 0; outer < 300; ++outer) {
    sol.outer_iterations = outer + 1;
    const double lips = prog.lambda + prog.kappa * wmax + rho * sigma_sq;
    const double q_ratio = prog.lambda / lips;
    const double beta =
        (1.0 - std::sqrt(q_ratio)) / (1.0 + std::sqrt(q_ratio));
    const double inner_tol =
        std::max(std::sqrt(prog.lambda * tol) * 0.3, 1e-14 * (1.0 + wmax));

    y = x;
    x_prev = x;
    for (int inner = 0; inner < 20000; ++inner) {
      ++sol.inner_iterations;
      eval_rowsums(y);
      for (int v = 0; v < n; ++v) {
        grad[v] = prog.weights[v] * (1.0 + prog.kappa * y[v]) +
                  prog.lambda * y[v];
      }
      for (std::size_t r = 0; r < num_rows; ++r) {
        const double slack = (1.0 - rowsum[r]) + mu[r] / rho;
        if (slack > 0.0) {
          const double pull = rho * slack;
          for (int v : prog.rows[r]) grad[v] -= pull;
        }
      }
      double res = 0.0;
      double grad_dot_step = 0.0;
      for (int v = 0; v < n; ++v) {
        const double xn = std::clamp(y[v] - grad[v] / lips, 0.0, 1.0);
        const double dv = xn - y[v];
        res += dv * dv;
        x_prev[v] = x[v];
        x[v] = xn;
        grad_dot_step += grad[v] * (xn - x_prev[v]);
      }
      res = lips * std::sqrt(res);
      // Gradient-based adaptive restart: drop momentum when the step turns
      // against the gradient direction.
      const double b = grad_dot_step > 0.0 ? 0.0 : beta;
      for (int v = 0; v < n; ++v) y[v] = x[v] + b * (x[v] - x_prev[v]);
      if (res <= inner_tol) break;
      if (sol.inner_iterations >= max_total_inner) break;
    }

    eval_rowsums(x);
    double viol = 0.0;
    for (std::size_t r = 0; r < num_rows; ++r) {
      const double g = 1.0 - rowsum[r];
      viol = std::max(viol, g);
      mu[r] = std::max(0.0, mu[r] + rho * g);
    }
    best_q = std::max(best_q, detail::lagrangian_dual_value(prog, mu));

    std::vector<double> x_rep = x;
    detail::repair_rows(prog, x_rep);
    const double gap = objective_value(prog, x_rep) - best_q;
    last_gap = gap;
    if (viol <= kFeasTol && gap <= tol) {
      sol.x = std::move(x_rep);
      sol.certified_gap = gap;
      sol.max_violation = viol;
      return sol;
    }
    if (viol > 0.25 * prev_viol && rho < 1e14) rho *= 2.0;
    prev_viol = viol;
    if (sol.inner_iterations >= max_total_inner) break;
  }
  throw SolverError("solve_regularized: iteration budget exhausted (gap " +
                        std::to_string(last_gap) + ")",
                    last_gap);
}

inline LPSolution solve_regularized(const CoveringProgram& prog) {
  return solve_regularized(prog, prog.default_tol());
}

// Sensitivity of the weighted linear part to a single-coordinate bump:
// solves at w and at w + delta*1_S and returns sum_T |w_T x_T - w'_T x'_T|
// / delta.
inline double stability_probe(const CoveringProgram& prog, int var,
                              double delta, double tol) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("stability_probe: delta > 0 required");
  }
  const auto base = solve_regularized(prog, tol);
  CoveringProgram bumped = prog;
  bumped.weights.at(var) += delta;
  const auto moved = solve_regularized(bumped, tol);
  double total = 0.0;
  for (int v = 0; v < prog.num_vars; ++v) {
    total += std::abs(prog.weights[v] * base.x[v] -
                      bumped.weights[v] * moved.x[v]);
  }
  return total / delta;
}

// Optimal value of the plain covering LP (no regularizers), bracketed as
// [value - error_bound, value]: `value` is the weight of a feasible repaired
// point and `error_bound` is its certified distance to the plain Lagrangian
// dual, which lower-bounds the optimum by weak duality.
struct PlainLpValue {
  double value = 0.0;
  double error_bound = 0.0;
};

inline PlainLpValue plain_lp_optimum(const CoveringProgram& prog,
                                     double tol = 1e-8) {
  prog.validate();
  const int n = prog.num_vars;
  PlainLpValue out;
  if (prog.rows.empty()) return out;

  const std::size_t num_rows = prog.rows.size();
  double wmax = 0.0, wsum = 0.0;
  for (double w : prog.weights) {
    wmax = std::max(wmax, w);
    wsum += w;
  }
  const double scale = 1.0 + wsum;
  const double sigma_sq = detail::row_matrix_norm_sq(prog) * 1.05 + 1e-12;

  auto plain_dual = [&](const std::vector<double>& mu) {
    std::vector<double> colsum(n, 0.0);
    double q = 0.0;
    for (std::size_t r = 0; r < num_rows; ++r) {
      q += mu[r];
      for (int v : prog.rows[r]) colsum[v] += mu[r];
    }
    for (int v = 0; v < n; ++v) {
      q += std::min(0.0, prog.weights[v] - colsum[v]);
    }
    return q;
  };

  std::vector<double> x(n, 0.5), mu(num_rows, 0.0);
  std::vector<double> y = x, x_prev = x, grad(n), rowsum(num_rows);
  double rho = 1.0 + wmax;
  double best_q = -std::numeric_limits<double>::infinity();
  double last_gap = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < 400; ++outer) {
    const double lips = rho * sigma_sq + 1e-12;
    y = x;
    x_prev = x;
    double t_prev = 1.0;
    for (int inner = 0; inner < 4000; ++inner) {
      for (std::size_t r = 0; r < num_rows; ++r) {
        double s = 0.0;
        for (int v : prog.rows[r]) s += y[v];
        rowsum[r] = s;
      }
      for (int v = 0; v < n; ++v) grad[v] = prog.weights[v];
      for (std::size_t r = 0; r < num_rows; ++r) {
        const double slack = (1.0 - rowsum[r]) + mu[r] / rho;
        if (slack > 0.0) {
          const double pull = rho * slack;
          for (int v : prog.rows[r]) grad[v] -= pull;
        }
      }
      double res = 0.0;
      for (int v = 0; v < n; ++v) {
        const double xn = std::clamp(y[v] - grad[v] / lips, 0.0, 1.0);
        res += (xn - y[v]) * (xn - y[v]);
        x_prev[v] = x[v];
        x[v] = xn;
      }
      const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
      const double b = (t_prev - 1.0) / t;
      t_prev = t;
      for (int v = 0; v < n; ++v) y[v] = x[v] + b * (x[v] - x_prev[v]);
      if (lips * std::sqrt(res) <= 1e-10 * scale) break;
    }
    double viol = 0.0;
    for (std::size_t r = 0; r < num_rows; ++r) {
      double s = 0.0;
      for (int v : prog.rows[r]) s += x[v];
      const double g = 1.0 - s;
      viol = std::max(viol, g);
      mu[r] = std::max(0.0, mu[r] + rho * g);
    }
    best_q = std::max(best_q, plain_dual(mu));
    std::vector<double> x_rep = x;
    detail::repair_rows(prog, x_rep);
    double linear = 0.0;
    for (int v = 0; v < n; ++v) linear += prog.weights[v] * x_rep[v];
    last_gap = linear - best_q;
    if (last_gap <= tol * scale) {
      out.value = linear;
      out.error_bound = std::max(last_gap, 0.0);
      return out;
    }
    if (viol > 1e-10) rho *= 1.5;
  }
  throw SolverError("plain_lp_optimum: certified gap did not reach tolerance",
                    last_gap);
}

}  // namespace stablecover
