#pragma once

// Feedback vertex set pipeline: cycle-constrained regularized LP solved by
// cutting planes, exact vertex-weighted girth computation, cycle
// sparsification by independent binomial reweighting, and support rounding.
//
// Tape keys: "fvs/lambda/*", "fvs/b", "fvs/sp/v=<id>" (support draw),
// "fvs/sp/v=<id>/j=<trial>" (full sparsifier bits).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "stablecover/instance.hpp"
#include "stablecover/lp_core.hpp"
#include "stablecover/random_tape.hpp"
#include "stablecover/set_cover_lp.hpp"

namespace stablecover {

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Vertex-weighted shortest paths: dist[u] = minimum over paths src..u of the
// sum of z over all path vertices, endpoints included.  `blocked_vertex` is
// removed from the graph.
inline void vertex_weighted_dijkstra(const WeightedGraph& g,
                                     const std::vector<std::vector<int>>& adj,
                                     const std::vector<double>& z, int src,
                                     int blocked_vertex,
                                     std::vector<double>& dist,
                                     std::vector<int>& parent) {
  const int n = g.n;
  dist.assign(n, kInf);
  parent.assign(n, -1);
  std::vector<char> done(n, 0);
  if (src == blocked_vertex) return;
  dist[src] = z[src];
  for (int it = 0; it < n; ++it) {
    int u = -1;
    double best = kInf;
    for (int v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < best) {
        best = dist[v];
        u = v;
      }
    }
    if (u < 0) break;
    done[u] = 1;
    for (int v : adj[u]) {
      if (v == blocked_vertex) continue;
      const double cand = dist[u] + z[v];
      if (cand < dist[v]) {
        dist[v] = cand;
        parent[v] = u;
      }
    }
  }
}

// Variant that skips one undirected edge, identified by its endpoints.
inline void vertex_weighted_dijkstra_skip_edge(
    const WeightedGraph& g, const std::vector<std::vector<int>>& adj,
    const std::vector<double>& z, int src, int skip_u, int skip_v,
    std::vector<double>& dist, std::vector<int>& parent) {
  const int n = g.n;
  dist.assign(n, kInf);
  parent.assign(n, -1);
  std::vector<char> done(n, 0);
  dist[src] = z[src];
  for (int it = 0; it < n; ++it) {
    int u = -1;
    double best = kInf;
    for (int v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < best) {
        best = dist[v];
        u = v;
      }
    }
    if (u < 0) break;
    done[u] = 1;
    for (int v : adj[u]) {
      if ((u == skip_u && v == skip_v) || (u == skip_v && v == skip_u)) {
        continue;
      }
      const double cand = dist[u] + z[v];
      if (cand < dist[v]) {
        dist[v] = cand;
        parent[v] = u;
      }
    }
  }
}

inline std::vector<int> walk_parents(const std::vector<int>& parent, int to) {
  std::vector<int> path;
  for (int v = to; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

// Minimum z-weight of a simple cycle (length >= 3) through v, each cycle
// vertex counted once; +infinity when v lies on no cycle.  A cycle through v
// is v plus a path between two distinct neighbors in G - v, so scanning
// shortest paths from each neighbor is exact for nonnegative weights.
inline std::pair<double, std::vector<int>> min_weight_cycle_through(
    const WeightedGraph& g, const std::vector<double>& z, int v) {
  const auto adj = g.adjacency();
  double best = detail::kInf;
  std::vector<int> best_cycle;
  std::vector<double> dist;
  std::vector<int> parent;
  for (int a : adj[v]) {
    detail::vertex_weighted_dijkstra(g, adj, z, a, v, dist, parent);
    for (int b : adj[v]) {
      if (b == a) continue;
      if (dist[b] == detail::kInf) continue;
      const double cand = z[v] + dist[b];
      if (cand < best) {
        best = cand;
        best_cycle = detail::walk_parents(parent, b);
        best_cycle.insert(best_cycle.begin(), v);
      }
    }
  }
  return {best, best_cycle};
}

// Weighted girth of every vertex.
struct GirthTable {
  std::vector<double> g;  // +infinity for vertices on no cycle
};

inline GirthTable girth_table(const WeightedGraph& g,
                              const std::vector<double>& z) {
  GirthTable table;
  table.g.resize(g.n);
  for (int v = 0; v < g.n; ++v) {
    table.g[v] = min_weight_cycle_through(g, z, v).first;
  }
  return table;
}

// Globally minimum x-weight simple cycle; every cycle contains an edge, and
// the cheapest cycle through edge (a,b) is the shortest a-b path avoiding
// that edge, so the scan over edges is exact.
struct SeparationResult {
  double min_weight = detail::kInf;
  std::optional<std::vector<int>> violating;  // present iff weight < 1 - tol
};

inline SeparationResult separation_oracle(const WeightedGraph& g,
                                          const std::vector<double>& x,
                                          double sep_tol = 1e-6) {
  const auto adj = g.adjacency();
  SeparationResult result;
  std::vector<int> best_cycle;
  std::vector<double> dist;
  std::vector<int> parent;
  for (auto [a, b] : g.edges) {
    detail::vertex_weighted_dijkstra_skip_edge(g, adj, x, a, a, b, dist,
                                               parent);
    if (dist[b] < result.min_weight) {
      result.min_weight = dist[b];
      best_cycle = detail::walk_parents(parent, b);
    }
  }
  if (result.min_weight < 1.0 - sep_tol) result.violating = best_cycle;
  return result;
}

// Cutting-plane solve of the cycle-covering regularized LP: keep a working
// set of cycle rows, solve with lp_core, add the most violated cycle from the
// separation oracle, repeat until none is violated.  hint_rows seeds the
// working set (the solution is the unique full-LP optimum regardless of which
// rows were materialized, so hints only save iterations).
struct FvsLpResult {
  LPSolution sol;
  std::vector<std::vector<int>> rows;
  int cut_iterations = 0;
};

inline FvsLpResult solve_fvs_lp(
    const WeightedGraph& g, const std::vector<double>& w, double lambda,
    double kappa, double tol, double sep_tol = 1e-6,
    const std::vector<std::vector<int>>& hint_rows = {}) {
  FvsLpResult result;
  CoveringProgram prog;
  prog.num_vars = g.n;
  prog.weights = w;
  prog.lambda = lambda;
  prog.kappa = kappa;
  for (const auto& row : hint_rows) prog.rows.push_back(row);

  const std::size_t max_rows =
      static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n);
  std::vector<double> warm;
  while (true) {
    ++result.cut_iterations;
    LPSolution sol = prog.rows.empty()
                         ? solve_regularized(prog, tol)
                         : solve_regularized(prog, tol, warm);
    const auto sep = separation_oracle(g, sol.x, sep_tol);
    if (!sep.violating) {
      result.sol = std::move(sol);
      result.rows = prog.rows;
      return result;
    }
    if (prog.rows.size() >= max_rows) {
      throw SolverError("solve_fvs_lp: row budget exhausted",
                        sol.certified_gap);
    }
    std::vector<int> row = *sep.violating;
    std::sort(row.begin(), row.end());
    prog.rows.push_back(std::move(row));
    warm = sol.x;
  }
}

// ---------------------------------------------------------------------------
// Cycle sparsification
// ---------------------------------------------------------------------------

struct SparsifierOutput {
  std::vector<double> z_tilde;
  std::vector<double> p;
  double t = 0.0;
};

inline double sparsifier_repetitions(int n, double eps, double c_t) {
  return std::ceil(c_t * std::log(std::max(n, 3)) / (eps * eps));
}

// Independent binomial reweighting: z~_v = B(z_v, p_v) / p_v with
// p_v = min(t / ell_v, 1).  The binomial is sampled as z_v keyed Bernoulli
// bits so that bumping z_v by one changes at most one bit under a shared
// tape.
inline SparsifierOutput cycle_sparsify(const WeightedGraph& g,
                                       const std::vector<long long>& z,
                                       const std::vector<double>& ell,
                                       double eps, const RandomTape& tape,
                                       double c_t = 12.0) {
  if (!(eps > 0.0)) throw std::invalid_argument("cycle_sparsify: eps > 0");
  SparsifierOutput out;
  out.t = sparsifier_repetitions(g.n, eps, c_t);
  out.p.resize(g.n);
  out.z_tilde.resize(g.n);
  for (int v = 0; v < g.n; ++v) {
    if (!(ell[v] > 0.0)) {
      throw std::invalid_argument(
          "cycle_sparsify: girth lower bound must be positive");
    }
    if (z[v] < 1) {
      throw std::invalid_argument("cycle_sparsify: requires z_v >= 1");
    }
    const double p = std::min(out.t / ell[v], 1.0);
    out.p[v] = p;
    if (p >= 1.0) {
      out.z_tilde[v] = static_cast<double>(z[v]);
      continue;
    }
    long long hits = 0;
    TapeKey base("fvs/sp/v=");
    base.append(v);
    for (long long j = 0; j < z[v]; ++j) {
      TapeKey key = base;
      key.append("/j=").append(j);
      if (tape.uniform(key.view()) < p) ++hits;
    }
    out.z_tilde[v] = static_cast<double>(hits) / p;
  }
  return out;
}

// Support-only conversion: a single shared uniform per vertex against
// q_v = 1 - (1 - p_v)^{z_v}, the exact membership probability of
// {z~_v > 0}.
inline std::vector<int> sparsify_support(const WeightedGraph& g,
                                         const std::vector<long long>& z,
                                         const std::vector<double>& ell,
                                         double eps, const RandomTape& tape,
                                         double c_t = 12.0) {
  if (!(eps > 0.0)) throw std::invalid_argument("sparsify_support: eps > 0");
  const double t = sparsifier_repetitions(g.n, eps, c_t);
  std::vector<int> out;
  for (int v = 0; v < g.n; ++v) {
    if (!(ell[v] > 0.0)) {
      throw std::invalid_argument(
          "sparsify_support: girth lower bound must be positive");
    }
    if (z[v] < 1) {
      throw std::invalid_argument("sparsify_support: requires z_v >= 1");
    }
    const double p = std::min(t / ell[v], 1.0);
    const double q =
        p >= 1.0 ? 1.0 : 1.0 - std::exp(double(z[v]) * std::log1p(-p));
    TapeKey key("fvs/sp/v=");
    key.append(v);
    if (q >= 1.0 || tape.uniform(key.view()) < q) out.push_back(v);
  }
  return out;
}

// Rounding: scale the LP solution to integers z_v = ceil(n^2 x_v + b) with a
// shared offset b, then keep the sparsifier support with girth lower bound
// n^2 and quality 1/2.
inline std::vector<int> rounding_fvs(const WeightedGraph& g,
                                     const std::vector<double>& x,
                                     const RandomTape& tape,
                                     double c_t = 12.0) {
  const double n_sq = static_cast<double>(g.n) * g.n;
  const double b = sample_fixed(0.0, 1.0, tape, "fvs/b");
  std::vector<long long> z(g.n);
  for (int v = 0; v < g.n; ++v) {
    z[v] = std::max<long long>(
        1, static_cast<long long>(std::ceil(n_sq * x[v] + b)));
  }
  const std::vector<double> ell(g.n, n_sq);
  return sparsify_support(g, z, ell, 0.5, tape, c_t);
}

// ---------------------------------------------------------------------------
// End-to-end pipeline
// ---------------------------------------------------------------------------

struct FvsResult {
  std::vector<int> selected;
  double lambda = 0.0;
  double kappa = 0.0;
  int cut_iterations = 0;
  double certified_gap = 0.0;
  std::vector<std::vector<int>> rows;
  bool degenerate = false;
};

inline std::vector<int> vertices_on_cycles(const WeightedGraph& g) {
  std::vector<int> out;
  const std::vector<double> unit(g.n, 1.0);
  for (int v = 0; v < g.n; ++v) {
    if (min_weight_cycle_through(g, unit, v).first < detail::kInf) {
      out.push_back(v);
    }
  }
  return out;
}

inline FvsResult feedback_vertex_set(
    const WeightedGraph& g, const std::vector<double>& w, double eps,
    const RandomTape& tape, double C = 3.0, double c_t = 12.0,
    const std::vector<std::vector<int>>& hint_rows = {}) {
  FvsResult result;
  if (g.n <= 2) {
    result.degenerate = true;
    return result;  // no cycles exist
  }
  double weight_sum = 0.0;
  for (double v : w) weight_sum += v;
  if (weight_sum == 0.0) {
    result.degenerate = true;
    result.selected = vertices_on_cycles(g);
    return result;
  }
  const double lnn = LPSetCoverConfig::log_n(g.n);
  const double l_low = eps * weight_sum / (C * g.n * lnn);
  result.lambda = sample_ratio(l_low, 2.0, tape, "fvs/lambda");
  result.kappa = eps / (C * lnn);

  const double tol = std::min(1e-9, result.lambda * 1e-6);
  auto lp = solve_fvs_lp(g, w, result.lambda, result.kappa, tol, 1e-6,
                         hint_rows);
  result.cut_iterations = lp.cut_iterations;
  result.certified_gap = lp.sol.certified_gap;
  result.rows = std::move(lp.rows);
  result.selected = rounding_fvs(g, lp.sol.x, tape, c_t);
  return result;
}

inline FvsResult feedback_vertex_set(const WeightedGraph& g, double eps,
                                     const RandomTape& tape) {
  return feedback_vertex_set(g, g.weights, eps, tape);
}

}  // namespace stablecover
