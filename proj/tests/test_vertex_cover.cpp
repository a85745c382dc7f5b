#include "stablecover/vertex_cover.hpp"

#include <algorithm>
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "stablecover/metrics.hpp"

using namespace stablecover;

namespace {

WeightedGraph single_edge(double wu = 1, double wv = 2) {
  WeightedGraph g;
  g.n = 2;
  g.edges = {{0, 1}};
  g.weights = {wu, wv};
  return g;
}

WeightedGraph triangle(std::vector<double> w = {1, 1, 1}) {
  WeightedGraph g;
  g.n = 3;
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  g.weights = std::move(w);
  return g;
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST_CASE("compute_duals on a single edge") {
  const auto g = single_edge();
  const auto d = compute_duals(g, g.weights);
  REQUIRE(d.y[0] == Catch::Approx(1.0));
  REQUIRE(d.tight[0]);
  REQUIRE_FALSE(d.tight[1]);
}

TEST_CASE("compute_duals on a unit triangle") {
  const auto g = triangle();
  const auto d = compute_duals(g, g.weights);
  for (double y : d.y) REQUIRE(y == Catch::Approx(0.5));
  for (int v = 0; v < 3; ++v) REQUIRE(d.tight[v]);
}

TEST_CASE("zero-weight vertices are tight at time zero") {
  const auto g = single_edge(0, 2);
  const auto d = compute_duals(g, g.weights);
  REQUIRE(d.tight[0]);
  REQUIRE(d.y[0] == 0.0);
  REQUIRE(d.events.front() == std::pair<double, int>{0.0, 0});
}

TEST_CASE("dual feasibility and edge tightness on random graphs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n = 10;
    cfg.p = 0.45;
    const auto g = gen_graph(cfg);
    const auto d = compute_duals(g, g.weights);
    for (int v = 0; v < g.n; ++v) {
      REQUIRE(d.incident_sum[v] <= g.weights[v] + 1e-9 * g.weights[v] + 1e-15);
    }
    for (auto [u, v] : g.edges) {
      REQUIRE((d.tight[u] || d.tight[v]));
    }
    // Event times are nondecreasing.
    for (std::size_t i = 1; i < d.events.size(); ++i) {
      REQUIRE(d.events[i - 1].first <= d.events[i].first + 1e-15);
    }
  }
}

TEST_CASE("round_vc membership rules") {
  const auto g = triangle();
  const auto d = compute_duals(g, g.weights);
  REQUIRE(round_vc(g, g.weights, d, RandomTape(5)) ==
          std::vector<int>{0, 1, 2});

  WeightedGraph iso;
  iso.n = 2;
  iso.edges = {};
  iso.weights = {1, 1};
  const auto di = compute_duals(iso, iso.weights);
  REQUIRE(round_vc(iso, iso.weights, di, RandomTape(5)).empty());
}

TEST_CASE("single edge inclusion frequency matches the dual ratio") {
  const auto g = single_edge();
  const auto d = compute_duals(g, g.weights);
  const int trials = 100000;
  int with_v = 0;
  for (int i = 0; i < trials; ++i) {
    const auto out = round_vc(g, g.weights, d, RandomTape(i));
    REQUIRE(contains(out, 0));
    if (contains(out, 1)) ++with_v;
  }
  const double freq = static_cast<double>(with_v) / trials;
  REQUIRE(std::abs(freq - 0.5) < 3 * std::sqrt(0.25 / trials));
}

TEST_CASE("vertex_cover output and expected weight") {
  const auto g = single_edge();
  const int trials = 100000;
  double total = 0;
  for (int i = 0; i < trials; ++i) {
    const auto out = vertex_cover(g, RandomTape(i));
    REQUIRE(is_vertex_cover(g, out));
    for (int v : out) total += g.weights[v];
  }
  // E[weight] = 2 * sum_e y_e = 2 for this instance.
  const double mean = total / trials;
  REQUIRE(std::abs(mean - 2.0) < 3 * std::sqrt(1.0 / trials) * 2);
}

TEST_CASE("weak duality and expected weight identity on random graphs") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = 100 + seed;
    cfg.n = 9;
    cfg.p = 0.4;
    const auto g = gen_graph(cfg);
    const auto d = compute_duals(g, g.weights);
    double dual_value = 0;
    for (double y : d.y) dual_value += y;
    const auto opt = brute_opt_vertex_cover(g);
    REQUIRE(2 * dual_value <= 2 * opt.opt_value + 1e-9);

    const int trials = 4000;
    double total = 0;
    for (int i = 0; i < trials; ++i) {
      for (int v : vertex_cover(g, RandomTape(i))) total += g.weights[v];
    }
    const double mean = total / trials;
    const double expected = 2 * dual_value;
    double var_bound = 0;
    for (double w : g.weights) var_bound += w * w;
    REQUIRE(std::abs(mean - expected) <=
            3 * std::sqrt(var_bound / trials) + 1e-9);
  }
}

TEST_CASE("residual trace on hand instances") {
  const auto g = single_edge();
  const auto same = residual_trace(g, g.weights, g.weights);
  for (double v : same.values) REQUIRE(v == 0.0);

  const auto t = residual_trace(g, {1, 2}, {1.1, 2});
  REQUIRE(t.values.front() == Catch::Approx(0.1));
  for (std::size_t i = 1; i < t.values.size(); ++i) {
    REQUIRE(t.values[i] <= t.values[i - 1] + 1e-12);
  }
  REQUIRE(t.terminal_l1 <= 2 * 0.1 + 1e-12);
}

TEST_CASE("residual trace is nonincreasing on random weight pairs") {
  detail::DetRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    GeneratorConfig cfg;
    cfg.seed = trial;
    cfg.n = 4 + static_cast<int>(rng.below(7));
    cfg.p = 0.5;
    const auto g = gen_graph(cfg);
    std::vector<double> w2 = g.weights;
    for (double& x : w2) {
      if (rng.uniform() < 0.5) x = std::max(0.0, x + (rng.uniform() - 0.5));
    }
    const auto t = residual_trace(g, g.weights, w2);
    double l1 = 0;
    for (int v = 0; v < g.n; ++v) l1 += std::abs(g.weights[v] - w2[v]);
    REQUIRE(t.values.front() == Catch::Approx(l1));
    for (std::size_t i = 1; i < t.values.size(); ++i) {
      REQUIRE(t.values[i] <= t.values[i - 1] + 1e-9);
    }
    REQUIRE(t.terminal_l1 <= 2 * l1 + 1e-9);
  }
}
