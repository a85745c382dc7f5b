#include "stablecover/random_tape.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

using namespace stablecover;

namespace {

// Two-sided Kolmogorov-Smirnov statistic against the U[lo,hi] CDF.
double ks_statistic(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = (xs[i] - lo) / (hi - lo);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

double ks_critical_1pct(std::size_t n) {
  return 1.6276 / std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_CASE("tape_uniform is deterministic in (seed, key)") {
  RandomTape tape(12345);
  REQUIRE(tape.uniform("vc/z/v=3") == tape.uniform("vc/z/v=3"));
  RandomTape same(12345);
  REQUIRE(tape.uniform("ratio/round=2/u") == same.uniform("ratio/round=2/u"));
  RandomTape other(12346);
  REQUIRE(tape.uniform("vc/z/v=3") != other.uniform("vc/z/v=3"));
  const double u = tape.uniform("anything");
  REQUIRE(u >= 0.0);
  REQUIRE(u < 1.0);
}

TEST_CASE("tape_uniform streams for distinct keys are uncorrelated") {
  const int n = 100000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    RandomTape tape(static_cast<std::uint64_t>(i));
    const double x = tape.uniform("key/a");
    const double y = tape.uniform("key/b");
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  const double rho = cov / std::sqrt(vx * vy);
  REQUIRE(std::abs(rho) < 0.02);
}

TEST_CASE("tape_uniform marginal is uniform over seeds (KS at 1%)") {
  const std::size_t n = 100000;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = RandomTape(i).uniform("marginal/test");
  }
  REQUIRE(ks_statistic(std::move(xs), 0.0, 1.0) < ks_critical_1pct(n));
}

TEST_CASE("sample_fixed basics") {
  RandomTape tape(7);
  REQUIRE(sample_fixed(0, 1, tape, "k") == tape.uniform("k"));
  REQUIRE(sample_fixed(2, 2, tape, "k") == 2.0);
  REQUIRE_THROWS_AS(sample_fixed(1, 0, tape, "k"), std::invalid_argument);
  // 1-stability for constant intervals: the output cannot depend on any
  // weight vector, so replays are exactly equal.
  REQUIRE(sample_fixed(0.25, 0.75, tape, "z") ==
          sample_fixed(0.25, 0.75, tape, "z"));
}

TEST_CASE("sample_ratio validates parameters") {
  RandomTape tape(7);
  REQUIRE_THROWS_AS(sample_ratio(0.0, 2.0, tape, "r"), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_ratio(1.0, 1.0, tape, "r"), std::invalid_argument);
}

TEST_CASE("sample_ratio replays identically for equal inputs") {
  RandomTape tape(99);
  REQUIRE(sample_ratio(1.0, 2.0, tape, "r") ==
          sample_ratio(1.0, 2.0, tape, "r"));
}

TEST_CASE("sample_ratio mean matches l(1+c)/2") {
  const int n = 100000;
  const double l = 1.0, c = 2.0;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    sum += sample_ratio(l, c, RandomTape(i), "r");
  }
  const double mean = sum / n;
  const double se = (c - 1) * l / std::sqrt(12.0) / std::sqrt(double(n));
  REQUIRE(std::abs(mean - l * (1 + c) / 2) < 3 * se);
}

TEST_CASE("sample_ratio marginal is exactly U[l, c l] (KS at 1%)") {
  const std::size_t n = 100000;
  const std::pair<double, double> cases[] = {{1.0, 2.0}, {0.5, 4.0}, {10.0, 1.5}};
  for (auto [l, c] : cases) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = sample_ratio(l, c, RandomTape(i), "r");
      REQUIRE(xs[i] >= l);
      REQUIRE(xs[i] <= c * l);
    }
    INFO("l=" << l << " c=" << c);
    REQUIRE(ks_statistic(std::move(xs), l, c * l) < ks_critical_1pct(n));
  }
}

namespace {

double ratio_disagreement(double l, double l2, double c, int trials) {
  int diff = 0;
  for (int i = 0; i < trials; ++i) {
    RandomTape tape(static_cast<std::uint64_t>(i));
    if (sample_ratio(l, c, tape, "r") != sample_ratio(l2, c, tape, "r")) {
      ++diff;
    }
  }
  return static_cast<double>(diff) / trials;
}

double uniform_tv(double l, double l2, double c) {
  // TV(U[l, c l], U[l2, c l2]) for l < l2 assuming overlap.
  return c * (l2 - l) / ((c - 1) * l2);
}

}  // namespace

TEST_CASE("sample_ratio coupled disagreement is bounded by C_stab * TV") {
  const int n = 100000;
  const double l = 1.0, l2 = 1.01, c = 2.0;
  const double rate = ratio_disagreement(l, l2, c, n);
  const double tv = uniform_tv(l, l2, c);
  const double sigma = std::sqrt(rate * (1 - rate) / n);
  const double c_stab = rate / tv;
  INFO("measured C_stab = " << c_stab);
  REQUIRE(rate <= 8.0 * tv + 3 * sigma);
}

TEST_CASE("sample_ratio disagreement is monotone as l' approaches l") {
  const int n = 100000;
  const double l = 1.0, c = 2.0;
  const double deltas[] = {0.08, 0.04, 0.02, 0.01, 0.005};
  double prev = 1.0;
  for (double d : deltas) {
    const double rate = ratio_disagreement(l, l + d, c, n);
    const double slack = 3 * std::sqrt(std::max(rate, 1e-4) / n);
    INFO("delta=" << d << " rate=" << rate);
    REQUIRE(rate <= prev + slack);
    prev = rate;
  }
}
