#include "stablecover/set_cover_greedy.hpp"

#include <cmath>
#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "stablecover/metrics.hpp"

using namespace stablecover;

TEST_CASE("compute_index matches hand arithmetic") {
  // w = s^(Kb) exactly with M=1 gives index 0.
  REQUIRE(compute_index(1.0, 0.0, 2, 1, 1) == 0);
  // s=2, M=3, b=0, w=5: floor(3 log2 5) = 6.
  REQUIRE(compute_index(5.0, 0.0, 2, 1, 3) == 6);
  REQUIRE_THROWS_AS(compute_index(1.0, 0.0, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("exact comparator detects true ties floating keys miss") {
  // s=2, M=1: (i=3,|A|=3) and (i=4,|A|=6) both have x = 3 - log2 3.
  REQUIRE(detail::compare_exact(3, 3, 4, 6, 2, 1) == 0);
  REQUIRE(detail::compare_exact(3, 2, 4, 4, 2, 1) == 0);
  REQUIRE(detail::compare_exact(3, 3, 4, 5, 2, 1) < 0);
  REQUIRE(detail::compare_exact(4, 4, 3, 3, 2, 1) > 0);
  REQUIRE(detail::compare_exact(2, 1, 3, 1, 2, 1) < 0);
  // Negative indices shift cleanly.
  REQUIRE(detail::compare_exact(-5, 1, -4, 2, 2, 1) == 0);
}

TEST_CASE("exact comparator agrees with floating keys away from ties") {
  detail::DetRng rng(11);
  for (int trial = 0; trial < 20000; ++trial) {
    const int s = 2 + static_cast<int>(rng.below(3));
    const int m_param = 1 + static_cast<int>(rng.below(6));
    const long long i1 = static_cast<long long>(rng.below(200)) - 100;
    const long long i2 = static_cast<long long>(rng.below(200)) - 100;
    const int a1 = 1 + static_cast<int>(rng.below(s));
    const int a2 = 1 + static_cast<int>(rng.below(s));
    const double log_s = std::log(double(s));
    const double x1 = double(i1) - m_param * std::log(double(a1)) / log_s;
    const double x2 = double(i2) - m_param * std::log(double(a2)) / log_s;
    const int c = detail::compare_exact(i1, a1, i2, a2, s, m_param);
    if (std::abs(x1 - x2) > 1e-6) {
      REQUIRE(c == (x1 < x2 ? -1 : 1));
    } else {
      // Near-ties must be genuine ties of the integer encoding.
      REQUIRE(c == 0);
    }
  }
}

TEST_CASE("level monotonicity: lower level sorts first") {
  detail::DetRng rng(12);
  const int k_param = 3, m_param = 2, s = 3;
  const long long km = k_param * m_param;
  for (int trial = 0; trial < 5000; ++trial) {
    const long long i1 = static_cast<long long>(rng.below(300)) - 150;
    const long long i2 = static_cast<long long>(rng.below(300)) - 150;
    const int a1 = 1 + static_cast<int>(rng.below(s));
    const int a2 = 1 + static_cast<int>(rng.below(s));
    if (!detail::admits_subset(i1, a1, s, k_param, m_param)) continue;
    if (!detail::admits_subset(i2, a2, s, k_param, m_param)) continue;
    auto level = [&](long long i) {
      return static_cast<long long>(std::floor(double(i) / double(km)));
    };
    if (level(i1) < level(i2)) {
      REQUIRE(detail::compare_exact(i1, a1, i2, a2, s, m_param) < 0);
    }
  }
}

TEST_CASE("build_queue structure") {
  GreedyParams params;
  params.K = 2;
  params.M = 1;

  SetSystem sys;
  sys.n_elements = 3;
  sys.sets = {{0}, {1, 2}};
  sys.weights = {1.0, 1.0};

  // Singleton parent contributes exactly one tuple; every positive-weight
  // set keeps all its singleton tuples.
  const auto queue = build_queue(sys, sys.weights, params, 0.25);
  int singleton_parent = 0, single_tuples = 0, full_tuples = 0;
  for (const auto& t : queue) {
    if (t.parent == 0) ++singleton_parent;
    if (t.subset_size == 1) ++single_tuples;
    if (t.parent == 1 && t.subset_size == 2) ++full_tuples;
  }
  REQUIRE(singleton_parent == 1);
  REQUIRE(single_tuples == 3);
  const long long idx = compute_index(1.0, 0.25, 2, params.K, params.M);
  REQUIRE(full_tuples == (is_hashed(idx, 2, 2, params.K, params.M) ? 0 : 1));
}

TEST_CASE("K=M=1 discards every full pair") {
  // With KM = 1 the index mod is always 0 < M log_s 2 = 1.
  GreedyParams params;
  params.K = 1;
  params.M = 1;
  SetSystem sys;
  sys.n_elements = 2;
  sys.sets = {{0, 1}, {0}, {1}};
  sys.weights = {1.0, 1.0, 1.0};
  const auto queue = build_queue(sys, sys.weights, params, 0.7);
  for (const auto& t : queue) REQUIRE(t.subset_size == 1);
}

TEST_CASE("zero-weight sets produce -infinity tuples and win") {
  GreedyParams params;
  params.K = 2;
  params.M = 2;
  SetSystem sys;
  sys.n_elements = 3;
  sys.sets = {{0, 1, 2}, {0}, {1}, {2}};
  sys.weights = {0.0, 1.0, 1.0, 1.0};
  for (int seed = 0; seed < 30; ++seed) {
    REQUIRE(lipschitz_greedy(sys, sys.weights, params, RandomTape(seed)) ==
            std::vector<int>{0});
  }
}

TEST_CASE("single covering set is the whole answer when not hashed") {
  GreedyParams params;
  params.K = 4;
  params.M = 2;
  SetSystem sys;
  sys.n_elements = 3;
  sys.sets = {{0, 1, 2}};
  sys.weights = {3.0};
  int not_hashed = 0;
  for (int seed = 0; seed < 50; ++seed) {
    RandomTape tape(seed);
    const double b = sample_fixed(0, 1, tape, "lg/b");
    const long long idx = compute_index(3.0, b, 3, params.K, params.M);
    const auto out = lipschitz_greedy(sys, sys.weights, params, tape);
    REQUIRE(out == std::vector<int>{0});  // only set; always selected
    if (!is_hashed(idx, 3, 3, params.K, params.M)) ++not_hashed;
  }
  REQUIRE(not_hashed > 0);
}

TEST_CASE("forced singleton instances cost exactly the weight sum") {
  GreedyParams params;
  params.K = 2;
  params.M = 1;
  SetSystem sys;
  sys.n_elements = 4;
  sys.sets = {{0}, {1}, {2}, {3}, {0, 1}};
  sys.weights = {1, 1, 1, 1, 1000};
  for (int seed = 0; seed < 20; ++seed) {
    const auto out = lipschitz_greedy(sys, sys.weights, params,
                                      RandomTape(seed));
    REQUIRE(out == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("tie_priority behaves like a lazy random permutation") {
  RandomTape tape(77);
  REQUIRE(tie_priority({1, 2}, tape) == tie_priority({1, 2}, tape));
  REQUIRE(tie_priority({1, 2}, tape) != tie_priority({1, 3}, tape));

  // Orderings of three subsets should be uniform over the 6 permutations.
  const std::vector<std::vector<int>> subsets = {{0}, {1}, {2}};
  std::map<std::array<int, 3>, int> counts;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    RandomTape t(seed);
    std::array<int, 3> rank{0, 1, 2};
    std::sort(rank.begin(), rank.end(), [&](int a, int b) {
      return tie_priority(subsets[a], t) < tie_priority(subsets[b], t);
    });
    counts[rank]++;
  }
  double chi2 = 0;
  const double expect = trials / 6.0;
  for (const auto& [perm, c] : counts) {
    chi2 += (c - expect) * (c - expect) / expect;
  }
  REQUIRE(counts.size() == 6);
  REQUIRE(chi2 < 15.086);  // chi^2_5 at the 1% level
}

TEST_CASE("greedy is feasible and near-optimal on random instances") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = 500 + seed;
    cfg.n = 10;
    cfg.m = 8;
    cfg.s = 3;
    cfg.f = 3;
    const auto sys = gen_set_system(cfg);
    if (sys.max_set_size() < 2) continue;
    const auto params = GreedyParams::from_epsilon(1.0, sys.max_set_size());
    const double opt = brute_opt_set_cover(sys).opt_value;
    double h_s = 0;
    for (int i = 1; i <= sys.max_set_size(); ++i) h_s += 1.0 / i;
    const double ratio_bound =
        h_s * (1.0 + double(sys.max_set_size() - 1) / params.K) *
        std::pow(double(sys.max_set_size()), 1.0 / params.M);
    const int trials = 3000;
    double total = 0;
    for (int i = 0; i < trials; ++i) {
      const auto out = lipschitz_greedy(sys, sys.weights, params,
                                        RandomTape(i));
      REQUIRE(is_set_cover(sys, out));
      for (int s : out) total += sys.weights[s];
    }
    REQUIRE(total / trials <= ratio_bound * opt * 1.05);
  }
}

TEST_CASE("hash probability per set is at most 1/K") {
  GreedyParams params;
  params.K = 3;
  params.M = 2;
  SetSystem sys;
  sys.n_elements = 4;
  sys.sets = {{0, 1}, {1, 2, 3}, {0, 2}};
  sys.weights = {0.7, 2.3, 5.1};
  const int trials = 20000;
  std::vector<int> hashed(sys.sets.size(), 0);
  for (int seed = 0; seed < trials; ++seed) {
    RandomTape tape(seed);
    const double b = sample_fixed(0, 1, tape, "lg/b");
    for (std::size_t s = 0; s < sys.sets.size(); ++s) {
      const auto idx =
          compute_index(sys.weights[s], b, sys.max_set_size(), params.K,
                        params.M);
      if (is_hashed(idx, static_cast<int>(sys.sets[s].size()),
                    sys.max_set_size(), params.K, params.M)) {
        ++hashed[s];
      }
    }
  }
  for (std::size_t s = 0; s < sys.sets.size(); ++s) {
    const double freq = static_cast<double>(hashed[s]) / trials;
    const double p = 1.0 / params.K;
    REQUIRE(freq <= p + 3 * std::sqrt(p * (1 - p) / trials));
  }
}

TEST_CASE("s=1 and oversized expansions are rejected") {
  SetSystem singles;
  singles.n_elements = 2;
  singles.sets = {{0}, {1}};
  singles.weights = {1, 1};
  GreedyParams params;
  REQUIRE_THROWS_AS(build_queue(singles, singles.weights, params, 0.5),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(GreedyParams::from_epsilon(1.0, 1), std::invalid_argument);

  SetSystem wide;
  wide.n_elements = 30;
  wide.sets.push_back({});
  for (int e = 0; e < 30; ++e) wide.sets[0].push_back(e);
  wide.weights = {1};
  params.subset_budget = 1 << 10;
  REQUIRE_THROWS_AS(build_queue(wide, wide.weights, params, 0.5), SizeError);
}
