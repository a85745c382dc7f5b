#pragma once

// Output-distance computations, exact brute-force optima, feasibility
// checkers, and simple-cycle machinery.  Everything here is an oracle for
// tests and audits: exactness at desk scale beats speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablecover/instance.hpp"

namespace stablecover {

// A selected id set together with the weight vector it was produced under.
struct WeightedOutput {
  std::vector<int> selected;
  std::vector<double> weights;
};

// d_w((S,w),(S',w')) = sum_{v in S^S'} |w_v - w'_v| + w(S\S') + w'(S'\S).
inline double weighted_distance(const WeightedOutput& a,
                                const WeightedOutput& b) {
  if (a.weights.size() != b.weights.size()) {
    throw std::invalid_argument("weighted_distance: dimension mismatch");
  }
  const int n = static_cast<int>(a.weights.size());
  std::vector<char> in_a(n, 0), in_b(n, 0);
  for (int v : a.selected) {
    if (v < 0 || v >= n) {
      throw std::invalid_argument("weighted_distance: id out of range");
    }
    in_a[v] = 1;
  }
  for (int v : b.selected) {
    if (v < 0 || v >= n) {
      throw std::invalid_argument("weighted_distance: id out of range");
    }
    in_b[v] = 1;
  }
  double d = 0.0;
  for (int v = 0; v < n; ++v) {
    if (in_a[v] && in_b[v]) {
      d += std::abs(a.weights[v] - b.weights[v]);
    } else if (in_a[v]) {
      d += a.weights[v];
    } else if (in_b[v]) {
      d += b.weights[v];
    }
  }
  return d;
}

namespace detail {

// Min-cost assignment on a square matrix (Hungarian algorithm with
// potentials, O(n^3)).
inline double min_cost_assignment(const std::vector<std::vector<double>>& c) {
  const int n = static_cast<int>(c.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // column -> row, 1-based
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    std::vector<int> way(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += c[match[j] - 1][j - 1];
  return total;
}

}  // namespace detail

// Exact earth mover's distance between two empirical output samples of equal
// size, solved as a min-cost perfect matching.  The shared-randomness
// estimator in the audit module is the scalable path; this one is the
// independent cross-check for tiny N.
inline double empirical_em(const std::vector<WeightedOutput>& samples_a,
                           const std::vector<WeightedOutput>& samples_b) {
  if (samples_a.size() != samples_b.size()) {
    throw std::invalid_argument("empirical_em: sample counts differ");
  }
  if (samples_a.empty()) return 0.0;
  if (samples_a.size() > 64) {
    throw SizeError("empirical_em: N > 64, use the shared-randomness audit");
  }
  const int n = static_cast<int>(samples_a.size());
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cost[i][j] = weighted_distance(samples_a[i], samples_b[j]);
    }
  }
  return detail::min_cost_assignment(cost) / n;
}

// ---------------------------------------------------------------------------
// Feasibility checkers
// ---------------------------------------------------------------------------

inline bool is_vertex_cover(const WeightedGraph& g,
                            const std::vector<int>& candidate) {
  std::vector<char> in(g.n, 0);
  for (int v : candidate) in.at(v) = 1;
  for (auto [u, v] : g.edges) {
    if (!in[u] && !in[v]) return false;
  }
  return true;
}

inline bool is_set_cover(const SetSystem& sys,
                         const std::vector<int>& candidate) {
  std::vector<char> hit(sys.n_elements, 0);
  for (int s : candidate) {
    for (int e : sys.sets.at(s)) hit[e] = 1;
  }
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

// True when the graph minus `removed` contains no cycle (forest test).
inline bool is_acyclic_after_removal(const WeightedGraph& g,
                                     const std::vector<int>& removed) {
  std::vector<char> gone(g.n, 0);
  for (int v : removed) gone.at(v) = 1;
  std::vector<int> parent(g.n);
  for (int v = 0; v < g.n; ++v) parent[v] = v;
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (auto [u, v] : g.edges) {
    if (gone[u] || gone[v]) continue;
    const int ru = find(u), rv = find(v);
    if (ru == rv) return false;
    parent[ru] = rv;
  }
  return true;
}

inline bool is_feedback_vertex_set(const WeightedGraph& g,
                                   const std::vector<int>& candidate) {
  return is_acyclic_after_removal(g, candidate);
}

// ---------------------------------------------------------------------------
// Exact optima by branch and bound
// ---------------------------------------------------------------------------

struct OracleResult {
  double opt_value = 0.0;
  std::vector<int> witness;
};

namespace detail {

struct VcSearch {
  const WeightedGraph* g;
  std::vector<char> chosen;
  double best;
  std::vector<int> best_set;

  void recurse(std::size_t edge_idx, double weight) {
    if (weight >= best) return;
    const auto& edges = g->edges;
    while (edge_idx < edges.size() &&
           (chosen[edges[edge_idx].first] || chosen[edges[edge_idx].second])) {
      ++edge_idx;
    }
    if (edge_idx == edges.size()) {
      best = weight;
      best_set.clear();
      for (int v = 0; v < g->n; ++v) {
        if (chosen[v]) best_set.push_back(v);
      }
      return;
    }
    for (int v : {edges[edge_idx].first, edges[edge_idx].second}) {
      chosen[v] = 1;
      recurse(edge_idx + 1, weight + g->weights[v]);
      chosen[v] = 0;
    }
  }
};

}  // namespace detail

inline OracleResult brute_opt_vertex_cover(const WeightedGraph& g) {
  if (g.n > 24) throw SizeError("brute_opt_vertex_cover: n > 24");
  detail::VcSearch search;
  search.g = &g;
  search.chosen.assign(g.n, 0);
  search.best = std::numeric_limits<double>::infinity();
  // Zero-weight vertices are free; taking them never hurts the optimum.
  double base = 0.0;
  for (int v = 0; v < g.n; ++v) {
    if (g.weights[v] == 0.0) search.chosen[v] = 1;
  }
  search.recurse(0, base);
  return {search.best, search.best_set};
}

namespace detail {

struct ScSearch {
  const SetSystem* sys;
  const std::vector<std::vector<int>>* covering;
  std::vector<int> cover_count;  // per element
  std::vector<char> chosen;
  double best;
  std::vector<int> best_set;

  void take(int s, int dir) {
    chosen[s] = dir;
    for (int e : sys->sets[s]) cover_count[e] += dir ? 1 : -1;
  }

  void recurse(int elem, double weight) {
    if (weight >= best) return;
    while (elem < sys->n_elements && cover_count[elem] > 0) ++elem;
    if (elem == sys->n_elements) {
      best = weight;
      best_set.clear();
      for (std::size_t s = 0; s < sys->sets.size(); ++s) {
        if (chosen[s]) best_set.push_back(static_cast<int>(s));
      }
      return;
    }
    for (int s : (*covering)[elem]) {
      take(s, 1);
      recurse(elem + 1, weight + sys->weights[s]);
      take(s, 0);
    }
  }
};

}  // namespace detail

inline OracleResult brute_opt_set_cover(const SetSystem& sys) {
  if (sys.sets.size() > 24) throw SizeError("brute_opt_set_cover: |F| > 24");
  if (!sys.coverable()) {
    throw InfeasibleError("brute_opt_set_cover: some element is uncoverable");
  }
  const auto covering = sys.covering_sets();
  detail::ScSearch search;
  search.sys = &sys;
  search.covering = &covering;
  search.cover_count.assign(sys.n_elements, 0);
  search.chosen.assign(sys.sets.size(), 0);
  search.best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sys.sets.size(); ++s) {
    if (sys.weights[s] == 0.0) search.take(static_cast<int>(s), 1);
  }
  search.recurse(0, 0.0);
  return {search.best, search.best_set};
}

namespace detail {

// Any cycle in the graph minus `gone`, as a vertex list; empty if acyclic.
inline std::vector<int> find_cycle(const WeightedGraph& g,
                                   const std::vector<char>& gone) {
  const auto adj = g.adjacency();
  std::vector<int> parent(g.n, -2);
  for (int root = 0; root < g.n; ++root) {
    if (gone[root] || parent[root] != -2) continue;
    std::vector<int> stack{root};
    parent[root] = -1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (gone[v] || v == parent[u]) continue;
        if (parent[v] == -2) {
          parent[v] = u;
          stack.push_back(v);
        } else {
          // Found u-v with v already reached: walk both ancestries.
          std::vector<int> pu, pv;
          for (int x = u; x != -1; x = parent[x]) pu.push_back(x);
          for (int x = v; x != -1; x = parent[x]) pv.push_back(x);
          std::reverse(pu.begin(), pu.end());
          std::reverse(pv.begin(), pv.end());
          std::size_t k = 0;
          while (k + 1 < pu.size() && k + 1 < pv.size() &&
                 pu[k + 1] == pv[k + 1]) {
            ++k;
          }
          std::vector<int> cycle(pu.begin() + k, pu.end());
          for (std::size_t i = pv.size(); i-- > k + 1;) cycle.push_back(pv[i]);
          return cycle;
        }
      }
    }
  }
  return {};
}

struct FvsSearch {
  const WeightedGraph* g;
  std::vector<char> chosen;
  double best;
  std::vector<int> best_set;

  void recurse(double weight) {
    if (weight >= best) return;
    const auto cycle = find_cycle(*g, chosen);
    if (cycle.empty()) {
      best = weight;
      best_set.clear();
      for (int v = 0; v < g->n; ++v) {
        if (chosen[v]) best_set.push_back(v);
      }
      return;
    }
    for (int v : cycle) {
      chosen[v] = 1;
      recurse(weight + g->weights[v]);
      chosen[v] = 0;
    }
  }
};

}  // namespace detail

inline OracleResult brute_opt_fvs(const WeightedGraph& g) {
  if (g.n > 20) throw SizeError("brute_opt_fvs: n > 20");
  detail::FvsSearch search;
  search.g = &g;
  search.chosen.assign(g.n, 0);
  search.best = std::numeric_limits<double>::infinity();
  for (int v = 0; v < g.n; ++v) {
    if (g.weights[v] == 0.0) search.chosen[v] = 1;
  }
  search.recurse(0.0);
  return {search.best, search.best_set};
}

// ---------------------------------------------------------------------------
// Simple-cycle enumeration
// ---------------------------------------------------------------------------

// All simple cycles of length >= 3, each reported once up to rotation and
// reflection (the cycle starts at its smallest vertex and the second vertex
// is smaller than the last).  Throws CycleOverflowError past max_count.
inline std::vector<std::vector<int>> enumerate_simple_cycles(
    const WeightedGraph& g, std::size_t max_count = 1000000) {
  const auto adj = g.adjacency();
  std::vector<std::vector<int>> cycles;
  std::vector<int> path;
  std::vector<char> on_path(g.n, 0);

  auto dfs = [&](auto&& self, int root, int u) -> void {
    for (int v : adj[u]) {
      if (v == root && path.size() >= 3) {
        if (path[1] < path.back()) {
          if (cycles.size() >= max_count) {
            throw CycleOverflowError("enumerate_simple_cycles: too many");
          }
          cycles.push_back(path);
        }
      } else if (v > root && !on_path[v]) {
        path.push_back(v);
        on_path[v] = 1;
        self(self, root, v);
        on_path[v] = 0;
        path.pop_back();
      }
    }
  };

  for (int root = 0; root < g.n; ++root) {
    path.assign(1, root);
    on_path.assign(g.n, 0);
    on_path[root] = 1;
    dfs(dfs, root, root);
  }
  return cycles;
}

// Number of distinct intersections C ∩ S over simple cycles C with
// z(C) <= bound.  Validates the cycle-counting bound by exhaustion.
inline long long count_cycle_induced_subsets(const WeightedGraph& g,
                                             const std::vector<double>& z,
                                             const std::vector<int>& s_set,
                                             double bound,
                                             std::size_t max_count = 1000000) {
  std::vector<char> in_s(g.n, 0);
  for (int v : s_set) in_s.at(v) = 1;
  std::set<std::vector<int>> induced;
  for (const auto& cycle : enumerate_simple_cycles(g, max_count)) {
    double zc = 0.0;
    for (int v : cycle) zc += z.at(v);
    if (zc > bound) continue;
    std::vector<int> inter;
    for (int v : cycle) {
      if (in_s[v]) inter.push_back(v);
    }
    std::sort(inter.begin(), inter.end());
    induced.insert(std::move(inter));
  }
  return static_cast<long long>(induced.size());
}

}  // namespace stablecover
