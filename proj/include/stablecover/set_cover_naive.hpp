#pragma once

// Near-minimum-weight set sampling for set cover: a shared offset b shifts a
// logarithmic weight grid with base (1 + eps/s); each element picks uniformly
// from the sets in its lowest nonempty bucket.  Zero-weight covering sets
// form a priority bucket selected before everything else, since the
// logarithmic bucketing is undefined at weight zero.
//
// Tape keys: "nsc/b" (shared offset), "nsc/e=<id>" (per-element choice).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stablecover/instance.hpp"
#include "stablecover/random_tape.hpp"

namespace stablecover {

namespace detail {

// Sets of the element's lowest nonempty bucket, in canonical id order.
inline std::vector<int> lowest_bucket(const std::vector<int>& covering,
                                      const std::vector<double>& w, double b,
                                      double log_base) {
  std::vector<int> zero;
  for (int s : covering) {
    if (w[s] == 0.0) zero.push_back(s);
  }
  if (!zero.empty()) return zero;
  long long best_t = 0;
  std::vector<int> bucket;
  for (int s : covering) {
    const long long t =
        static_cast<long long>(std::floor(std::log(w[s]) / log_base - b));
    if (bucket.empty() || t < best_t) {
      best_t = t;
      bucket.assign(1, s);
    } else if (t == best_t) {
      bucket.push_back(s);
    }
  }
  return bucket;
}

}  // namespace detail

// Algorithm: for each element, sample one covering set uniformly from the
// lowest bucket; the union is always a cover and its expected weight is at
// most (s + eps) * OPT.  eps is clamped into (0, s] (the analysis needs
// eps/s <= 1; callers warn on clamping).
inline std::vector<int> naive_set_cover(
    const SetSystem& sys, const std::vector<double>& w, double eps,
    const RandomTape& tape, const std::vector<std::vector<int>>& covering) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("naive_set_cover: eps must be positive");
  }
  const int s_max = std::max(1, sys.max_set_size());
  eps = std::min(eps, static_cast<double>(s_max));
  const double log_base = std::log1p(eps / s_max);
  const double b = sample_fixed(0.0, 1.0, tape, "nsc/b");
  for (int e = 0; e < sys.n_elements; ++e) {
    if (covering[e].empty()) {
      throw InfeasibleError("naive_set_cover: instance not coverable");
    }
  }

  std::vector<char> chosen(sys.sets.size(), 0);
  for (int e = 0; e < sys.n_elements; ++e) {
    const auto bucket = detail::lowest_bucket(covering[e], w, b, log_base);
    TapeKey key("nsc/e=");
    key.append(e);
    const double u = sample_fixed(0.0, 1.0, tape, key.view());
    const auto idx = static_cast<std::size_t>(u * bucket.size());
    chosen[bucket[std::min(idx, bucket.size() - 1)]] = 1;
  }
  std::vector<int> out;
  for (std::size_t s = 0; s < chosen.size(); ++s) {
    if (chosen[s]) out.push_back(static_cast<int>(s));
  }
  return out;
}

inline std::vector<int> naive_set_cover(const SetSystem& sys,
                                        const std::vector<double>& w,
                                        double eps, const RandomTape& tape) {
  return naive_set_cover(sys, w, eps, tape, sys.covering_sets());
}

inline std::vector<int> naive_set_cover(const SetSystem& sys, double eps,
                                        const RandomTape& tape) {
  return naive_set_cover(sys, sys.weights, eps, tape);
}

// Monte Carlo estimate of the per-element choice disagreement probability
// under the coupling (same tape) when w_T is bumped by delta.  Returns the
// maximum frequency over elements of T; each is bounded by 2 s delta /
// (eps w_T) plus sampling error.
inline double bucket_disagreement_rate(const SetSystem& sys,
                                       const std::vector<double>& w, int t_set,
                                       double delta, double eps, int trials,
                                       std::uint64_t seed0 = 0) {
  if (!(w.at(t_set) > 0.0)) {
    throw std::invalid_argument("bucket_disagreement_rate: requires w_T > 0");
  }
  if (!(delta > 0.0 && delta <= w[t_set])) {
    throw std::invalid_argument(
        "bucket_disagreement_rate: requires 0 < delta <= w_T");
  }
  const int s_max = std::max(1, sys.max_set_size());
  const double eps_c = std::min(std::max(eps, 1e-30), double(s_max));
  const double log_base = std::log1p(eps_c / s_max);
  std::vector<double> w2 = w;
  w2[t_set] += delta;
  const auto covering = sys.covering_sets();

  int disagree_any = 0;
  for (int trial = 0; trial < trials; ++trial) {
    RandomTape tape(seed0 + static_cast<std::uint64_t>(trial));
    const double b = sample_fixed(0.0, 1.0, tape, "nsc/b");
    bool diff = false;
    for (int e : sys.sets[t_set]) {
      const auto bucket = detail::lowest_bucket(covering[e], w, b, log_base);
      const auto bucket2 = detail::lowest_bucket(covering[e], w2, b, log_base);
      TapeKey key("nsc/e=");
      key.append(e);
      const double u = sample_fixed(0.0, 1.0, tape, key.view());
      const int pick = bucket[std::min(static_cast<std::size_t>(u * bucket.size()),
                                       bucket.size() - 1)];
      const int pick2 =
          bucket2[std::min(static_cast<std::size_t>(u * bucket2.size()),
                           bucket2.size() - 1)];
      if (pick != pick2) {
        diff = true;
        break;
      }
    }
    if (diff) ++disagree_any;
  }
  return static_cast<double>(disagree_any) / trials;
}

}  // namespace stablecover
