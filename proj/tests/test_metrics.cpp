#include "stablecover/metrics.hpp"

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "stablecover/instance.hpp"

using namespace stablecover;

namespace {

WeightedGraph triangle(std::vector<double> w = {1, 1, 1}) {
  WeightedGraph g;
  g.n = 3;
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  g.weights = std::move(w);
  return g;
}

WeightedGraph complete4() {
  WeightedGraph g;
  g.n = 4;
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  g.weights = {1, 1, 1, 1};
  return g;
}

}  // namespace

TEST_CASE("weighted_distance basics") {
  WeightedOutput a{{0, 1}, {1, 2, 0}};
  REQUIRE(weighted_distance(a, a) == 0.0);

  WeightedOutput single{{0}, {1}};
  WeightedOutput empty{{}, {1}};
  REQUIRE(weighted_distance(single, empty) == 1.0);
  REQUIRE(weighted_distance(empty, single) == 1.0);

  // S={a,b} with w=(1,2,-), S'={b,c} with w'=(1,3,4): |2-3| + 1 + 4 = 6.
  WeightedOutput s1{{0, 1}, {1, 2, 0}};
  WeightedOutput s2{{1, 2}, {1, 3, 4}};
  REQUIRE(weighted_distance(s1, s2) == 6.0);

  WeightedOutput wrong{{0}, {1, 2}};
  REQUIRE_THROWS_AS(weighted_distance(single, wrong), std::invalid_argument);
}

TEST_CASE("weighted_distance satisfies the triangle inequality") {
  detail::DetRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    auto make = [&] {
      WeightedOutput o;
      o.weights.resize(n);
      for (int v = 0; v < n; ++v) {
        o.weights[v] = rng.uniform() * 3;
        if (rng.uniform() < 0.5) o.selected.push_back(v);
      }
      return o;
    };
    const auto a = make(), b = make(), c = make();
    const double ab = weighted_distance(a, b);
    const double bc = weighted_distance(b, c);
    const double ac = weighted_distance(a, c);
    REQUIRE(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("empirical_em matches hand values") {
  WeightedOutput o1{{0}, {1, 5}};
  WeightedOutput o2{{1}, {1, 5}};
  REQUIRE(empirical_em({o1, o2}, {o1, o2}) == 0.0);
  REQUIRE(empirical_em({o1}, {o2}) == weighted_distance(o1, o2));

  // 2x2 case where the crossing matching is cheaper than identity.
  WeightedOutput a0{{0}, {1, 1}};
  WeightedOutput a1{{1}, {1, 1}};
  const double identity =
      (weighted_distance(a0, a1) + weighted_distance(a1, a0)) / 2;
  const double crossing =
      (weighted_distance(a0, a0) + weighted_distance(a1, a1)) / 2;
  REQUIRE(crossing < identity);
  REQUIRE(empirical_em({a0, a1}, {a1, a0}) == crossing);

  std::vector<WeightedOutput> big(65, o1);
  REQUIRE_THROWS_AS(empirical_em(big, big), SizeError);
  REQUIRE_THROWS_AS(empirical_em({o1}, {o1, o2}), std::invalid_argument);
}

TEST_CASE("brute_opt_vertex_cover on hand instances") {
  const auto t = brute_opt_vertex_cover(triangle());
  REQUIRE(t.opt_value == 2.0);
  REQUIRE(is_vertex_cover(triangle(), t.witness));

  WeightedGraph edgeless;
  edgeless.n = 3;
  edgeless.weights = {1, 1, 1};
  const auto e = brute_opt_vertex_cover(edgeless);
  REQUIRE(e.opt_value == 0.0);

  WeightedGraph single;
  single.n = 2;
  single.edges = {{0, 1}};
  single.weights = {3, 5};
  REQUIRE(brute_opt_vertex_cover(single).opt_value == 3.0);

  WeightedGraph big;
  big.n = 25;
  big.weights.assign(25, 1.0);
  REQUIRE_THROWS_AS(brute_opt_vertex_cover(big), SizeError);
}

TEST_CASE("brute_opt_set_cover on hand instances") {
  SetSystem singles;
  singles.n_elements = 3;
  singles.sets = {{0}, {1}, {2}};
  singles.weights = {1, 1, 1};
  REQUIRE(brute_opt_set_cover(singles).opt_value == 3.0);

  SetSystem two;
  two.n_elements = 2;
  two.sets = {{0}, {0, 1}};
  two.weights = {1, 2};
  const auto r = brute_opt_set_cover(two);
  REQUIRE(r.opt_value == 2.0);
  REQUIRE(is_set_cover(two, r.witness));

  SetSystem uncoverable;
  uncoverable.n_elements = 2;
  uncoverable.sets = {{0}};
  uncoverable.weights = {1};
  REQUIRE_THROWS_AS(brute_opt_set_cover(uncoverable), InfeasibleError);
}

TEST_CASE("brute_opt_fvs on hand instances") {
  const auto t = brute_opt_fvs(triangle({1, 2, 3}));
  REQUIRE(t.opt_value == 1.0);
  REQUIRE(t.witness == std::vector<int>{0});

  WeightedGraph path;
  path.n = 4;
  path.edges = {{0, 1}, {1, 2}, {2, 3}};
  path.weights = {1, 1, 1, 1};
  REQUIRE(brute_opt_fvs(path).opt_value == 0.0);

  // Removing any single vertex of K4 leaves a triangle.
  REQUIRE(brute_opt_fvs(complete4()).opt_value == 2.0);
}

TEST_CASE("oracle witnesses are feasible on random instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n = 9;
    cfg.p = 0.4;
    const auto g = gen_graph(cfg);
    const auto vc = brute_opt_vertex_cover(g);
    REQUIRE(is_vertex_cover(g, vc.witness));
    double w = 0;
    for (int v : vc.witness) w += g.weights[v];
    REQUIRE(w == Catch::Approx(vc.opt_value));

    const auto fvs = brute_opt_fvs(g);
    REQUIRE(is_feedback_vertex_set(g, fvs.witness));

    cfg.m = 8;
    cfg.s = 3;
    cfg.f = 4;
    const auto sys = gen_set_system(cfg);
    const auto sc = brute_opt_set_cover(sys);
    REQUIRE(is_set_cover(sys, sc.witness));
  }
}

TEST_CASE("enumerate_simple_cycles counts") {
  REQUIRE(enumerate_simple_cycles(triangle()).size() == 1);
  REQUIRE(enumerate_simple_cycles(triangle())[0] ==
          std::vector<int>{0, 1, 2});

  WeightedGraph tree;
  tree.n = 5;
  tree.edges = {{0, 1}, {0, 2}, {2, 3}, {2, 4}};
  tree.weights.assign(5, 1.0);
  REQUIRE(enumerate_simple_cycles(tree).empty());

  // K4: 4 triangles and 3 four-cycles.
  REQUIRE(enumerate_simple_cycles(complete4()).size() == 7);
  REQUIRE_THROWS_AS(enumerate_simple_cycles(complete4(), 3),
                    CycleOverflowError);
}

TEST_CASE("count_cycle_induced_subsets on hand instances") {
  const std::vector<double> unit{1, 1, 1, 1};
  REQUIRE(count_cycle_induced_subsets(triangle(), {1, 1, 1}, {0, 1, 2}, 2.0) ==
          0);
  REQUIRE(count_cycle_induced_subsets(triangle(), {1, 1, 1}, {0, 1, 2},
                                      1e100) == 1);
  REQUIRE(count_cycle_induced_subsets(complete4(), unit, {0, 1, 2, 3}, 3.0) ==
          4);
}

TEST_CASE("cycle counting bound holds on small random graphs") {
  // |{C ∩ S : z(C) <= alpha*g_min}| < (2m)^(2 alpha + 1/2) with g_min the
  // minimum weighted girth over S.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n = 8;
    cfg.p = 0.45;
    const auto g = gen_graph(cfg);
    const auto cycles = enumerate_simple_cycles(g);
    if (cycles.empty()) continue;
    const std::vector<double> z(g.n, 1.0);
    double g_min = 1e100;
    for (const auto& c : cycles) g_min = std::min(g_min, double(c.size()));
    std::vector<int> s_all(g.n);
    for (int v = 0; v < g.n; ++v) s_all[v] = v;
    const double m = static_cast<double>(g.edges.size());
    for (double alpha : {1.0, 1.5, 2.0}) {
      const auto count =
          count_cycle_induced_subsets(g, z, s_all, alpha * g_min);
      REQUIRE(static_cast<double>(count) <
              std::pow(2 * m, 2 * alpha + 0.5));
    }
  }
}

TEST_CASE("feasibility checkers") {
  WeightedGraph edgeless;
  edgeless.n = 2;
  edgeless.weights = {1, 1};
  REQUIRE(is_vertex_cover(edgeless, {}));

  REQUIRE_FALSE(is_vertex_cover(triangle(), {}));
  REQUIRE_FALSE(is_feedback_vertex_set(triangle(), {}));
  REQUIRE(is_vertex_cover(triangle(), {0, 1, 2}));
  REQUIRE(is_feedback_vertex_set(triangle(), {0, 1, 2}));

  SetSystem sys;
  sys.n_elements = 3;
  sys.sets = {{0, 1}, {2}};
  sys.weights = {1, 1};
  REQUIRE_FALSE(is_set_cover(sys, {}));
  REQUIRE_FALSE(is_set_cover(sys, {0}));
  REQUIRE(is_set_cover(sys, {0, 1}));
}
