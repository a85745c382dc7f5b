#pragma once

// Primal-dual vertex cover: all dual variables y_e grow at unit rate while
// neither endpoint is tight, then each vertex is kept with probability equal
// to its incident dual mass over its weight.  The dual growth is simulated
// event-exactly so the residual-distance diagnostics carry no discretization
// error.
//
// Tape keys: "vc/z/v=<id>".

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stablecover/instance.hpp"
#include "stablecover/random_tape.hpp"

namespace stablecover {

struct DualState {
  std::vector<double> y;             // per edge, final values (= stop times)
  std::vector<double> incident_sum;  // per vertex, sum of incident y_e
  std::vector<char> tight;
  std::vector<std::pair<double, int>> events;  // (time, vertex became tight)
};

// Event-driven simulation of the simultaneous unit-rate dual growth.  Each
// step advances to the next tightness event: dt is the minimum over non-tight
// vertices of residual / (number of incident growing edges).  Vertices with
// zero weight are tight at time zero.
inline DualState compute_duals(const WeightedGraph& g,
                               const std::vector<double>& w,
                               const std::vector<std::vector<int>>& incidence) {
  constexpr double kRelTol = 1e-12;
  const int n = g.n;
  const int m = static_cast<int>(g.edges.size());

  DualState d;
  d.y.assign(m, 0.0);
  d.incident_sum.assign(n, 0.0);
  d.tight.assign(n, 0);

  std::vector<char> active(m, 0);
  std::vector<int> active_deg(n, 0);

  for (int v = 0; v < n; ++v) {
    if (w[v] <= 0.0) {
      d.tight[v] = 1;
      d.events.emplace_back(0.0, v);
    }
  }
  int num_active = 0;
  for (int e = 0; e < m; ++e) {
    auto [u, v] = g.edges[e];
    if (!d.tight[u] && !d.tight[v]) {
      active[e] = 1;
      ++active_deg[u];
      ++active_deg[v];
      ++num_active;
    }
  }

  double t = 0.0;
  while (num_active > 0) {
    double dt = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
      if (d.tight[v] || active_deg[v] == 0) continue;
      dt = std::min(dt, (w[v] - d.incident_sum[v]) / active_deg[v]);
    }
    dt = std::max(dt, 0.0);
    t += dt;
    for (int e = 0; e < m; ++e) {
      if (!active[e]) continue;
      d.y[e] += dt;
      d.incident_sum[g.edges[e].first] += dt;
      d.incident_sum[g.edges[e].second] += dt;
    }
    // Batch all vertices that became tight at this event before deactivating
    // edges, so simultaneous ties are order-independent.
    std::vector<int> newly_tight;
    for (int v = 0; v < n; ++v) {
      if (d.tight[v] || active_deg[v] == 0) continue;
      if (w[v] - d.incident_sum[v] <= kRelTol * w[v]) newly_tight.push_back(v);
    }
    for (int v : newly_tight) {
      d.tight[v] = 1;
      d.events.emplace_back(t, v);
    }
    for (int v : newly_tight) {
      for (int e : incidence[v]) {
        if (!active[e]) continue;
        active[e] = 0;
        --active_deg[g.edges[e].first];
        --active_deg[g.edges[e].second];
        --num_active;
      }
    }
  }
  return d;
}

inline DualState compute_duals(const WeightedGraph& g,
                               const std::vector<double>& w) {
  return compute_duals(g, w, g.incidence());
}

// Keeps v when its weight is zero, when it is tight (inclusion ratio one), or
// when the shared uniform z(v) falls below the ratio.  Every edge ends the
// dual phase with a tight endpoint, so the output is always a vertex cover.
inline std::vector<int> round_vc(const WeightedGraph& g,
                                 const std::vector<double>& w,
                                 const DualState& d, const RandomTape& tape) {
  std::vector<int> out;
  for (int v = 0; v < g.n; ++v) {
    if (w[v] <= 0.0 || d.tight[v]) {
      out.push_back(v);
      continue;
    }
    const double ratio = d.incident_sum[v] / w[v];
    if (ratio <= 0.0) continue;
    TapeKey key("vc/z/v=");
    key.append(v);
    if (sample_fixed(0.0, 1.0, tape, key.view()) < ratio) out.push_back(v);
  }
  return out;
}

inline std::vector<int> vertex_cover(const WeightedGraph& g,
                                     const std::vector<double>& w,
                                     const RandomTape& tape) {
  return round_vc(g, w, compute_duals(g, w), tape);
}

inline std::vector<int> vertex_cover(
    const WeightedGraph& g, const std::vector<double>& w,
    const RandomTape& tape, const std::vector<std::vector<int>>& incidence) {
  return round_vc(g, w, compute_duals(g, w, incidence), tape);
}

// Classical deterministic primal-dual 2-approximation: grow the duals, take
// every tight vertex.  Not Lipschitz continuous; the audit module wraps it as
// the naive-rounding comparison baseline.
inline std::vector<int> tight_vertex_cover(
    const WeightedGraph& g, const std::vector<double>& w,
    const std::vector<std::vector<int>>& incidence) {
  const auto d = compute_duals(g, w, incidence);
  std::vector<int> out;
  for (int v = 0; v < g.n; ++v) {
    if (d.tight[v]) out.push_back(v);
  }
  return out;
}

inline std::vector<int> vertex_cover(const WeightedGraph& g,
                                     const RandomTape& tape) {
  return vertex_cover(g, g.weights, tape);
}

// Residual distance between two coupled dual runs:
//   RD(t) = sum_v |(w_v - sum_{e in δ(v)} y_e(t)) - (w'_v - sum y'_e(t))|.
// Since every y_e grows at unit rate until it stops, y_e(t) = min(t, y_e)
// with y_e the final value, so RD can be evaluated exactly at any time.
struct ResidualTrace {
  std::vector<double> times;
  std::vector<double> values;
  double terminal_l1 = 0.0;  // sum_v |sum y_e - sum y'_e|
};

inline ResidualTrace residual_trace(const WeightedGraph& g,
                                    const std::vector<double>& w,
                                    const std::vector<double>& w2) {
  const DualState a = compute_duals(g, w);
  const DualState b = compute_duals(g, w2);
  const auto incidence = g.incidence();

  std::vector<double> times{0.0};
  for (const auto& ev : a.events) times.push_back(ev.first);
  for (const auto& ev : b.events) times.push_back(ev.first);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  ResidualTrace trace;
  for (double t : times) {
    double rd = 0.0;
    for (int v = 0; v < g.n; ++v) {
      double sa = 0.0, sb = 0.0;
      for (int e : incidence[v]) {
        sa += std::min(t, a.y[e]);
        sb += std::min(t, b.y[e]);
      }
      rd += std::abs((w[v] - sa) - (w2[v] - sb));
    }
    trace.times.push_back(t);
    trace.values.push_back(rd);
  }
  for (int v = 0; v < g.n; ++v) {
    trace.terminal_l1 += std::abs(a.incident_sum[v] - b.incident_sum[v]);
  }
  return trace;
}

}  // namespace stablecover
