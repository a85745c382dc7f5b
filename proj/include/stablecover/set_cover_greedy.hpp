#pragma once

// Greedy set cover over the expanded subset family: weights are rounded to
// powers of s^(1/M) on a shared random grid, sets whose rounded index falls
// in a discarded window ("hashed" sets) are replaced by their singletons, and
// the classical greedy runs over tuples (x, A, S) with x = i_S - M log_s |A|
// in increasing order, ties broken by a shared random priority on A.
//
// Sort keys are irrational combinations, so ordering and tie detection use
// the exact integer comparison  s^{i1} |A2|^M  vs  s^{i2} |A1|^M.
//
// Tape keys: "lg/b", "lg/pi/A=<sorted elements>".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stablecover/instance.hpp"
#include "stablecover/random_tape.hpp"

namespace stablecover {

struct GreedyParams {
  int K = 1;
  int M = 1;
  // Guard against the 2^s expansion; the algorithm is polynomial only for
  // s = O(log n).
  std::uint64_t subset_budget = 1u << 22;

  // K = ceil(4 H_s / eps) (s-1), M = ceil(4 H_s ln s / eps); these make the
  // approximation ratio H_s (1 + (s-1)/K) s^(1/M) <= H_s + eps for eps <= 1.
  static GreedyParams from_epsilon(double eps, int s) {
    if (s < 2) {
      throw std::invalid_argument(
          "GreedyParams: requires s >= 2 (use naive_set_cover for s = 1)");
    }
    if (!(eps > 0.0)) throw std::invalid_argument("GreedyParams: eps > 0");
    double h_s = 0.0;
    for (int i = 1; i <= s; ++i) h_s += 1.0 / i;
    GreedyParams p;
    p.K = static_cast<int>(std::ceil(4.0 * h_s / eps)) * (s - 1);
    p.M = static_cast<int>(std::ceil(4.0 * h_s * std::log(double(s)) / eps));
    p.K = std::max(p.K, 1);
    p.M = std::max(p.M, 1);
    return p;
  }
};

// One entry of the expanded queue: subset A of parent set S with exact sort
// key x = index - M log_s |A|, encoded as the integer pair (index, |A|).
struct ExpandedTuple {
  bool neg_inf = false;  // zero-weight parent
  long long index = 0;   // i_S
  int subset_size = 1;
  std::vector<int> elements;  // sorted
  int parent = 0;
};

// The unique integer i with s^(Kb + i/M) <= w < s^(Kb + (i+1)/M); -infinity
// (encoded as neg_inf in tuples) for w = 0.
inline long long compute_index(double w, double b, int s, int K, int M) {
  if (s < 2) throw std::invalid_argument("compute_index: requires s >= 2");
  return static_cast<long long>(
      std::floor(M * (std::log(w) / std::log(double(s)) - double(K) * b)));
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

// x1 < x2  <=>  s^{i1} a2^M < s^{i2} a1^M, shifted so exponents stay
// nonnegative.  Returns -1, 0, +1.
inline int compare_exact(long long i1, int a1, long long i2, int a2, int s,
                         int m_param) {
  const long long d = i1 - i2;
  BigInt lhs = boost::multiprecision::pow(BigInt(a2), m_param);
  BigInt rhs = boost::multiprecision::pow(BigInt(a1), m_param);
  if (d > 0) {
    lhs *= boost::multiprecision::pow(BigInt(s), static_cast<unsigned>(d));
  } else if (d < 0) {
    rhs *= boost::multiprecision::pow(BigInt(s), static_cast<unsigned>(-d));
  }
  return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
}

// Admission test of the discarded window: i mod KM >= M log_s |A|, evaluated
// exactly as s^(i mod KM) >= |A|^M.
inline bool admits_subset(long long index, int subset_size, int s, int k_param,
                          int m_param) {
  const long long km = static_cast<long long>(k_param) * m_param;
  long long imod = index % km;
  if (imod < 0) imod += km;
  if (subset_size == 1) return true;      // M log_s 1 = 0
  if (imod >= m_param) return true;       // s^imod >= s^M >= |A|^M
  return boost::multiprecision::pow(BigInt(s), static_cast<unsigned>(imod)) >=
         boost::multiprecision::pow(BigInt(subset_size),
                                    static_cast<unsigned>(m_param));
}

inline void append_subset_key(TapeKey& key, const std::vector<int>& elems) {
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) key.append(",");
    key.append(elems[i]);
  }
}

}  // namespace detail

// Shared uniform priority on the canonical encoding of A; realizes the random
// permutation over small subsets lazily.
inline double tie_priority(const std::vector<int>& subset,
                           const RandomTape& tape) {
  TapeKey key("lg/pi/A=");
  detail::append_subset_key(key, subset);
  return tape.uniform(key.view());
}

// All admissible tuples (one per nonempty A ⊆ S passing the window test).
// Zero-weight parents contribute every nonempty subset at x = -infinity.
inline std::vector<ExpandedTuple> build_queue(const SetSystem& sys,
                                              const std::vector<double>& w,
                                              const GreedyParams& params,
                                              double b) {
  const int s_max = sys.max_set_size();
  if (s_max < 2) {
    throw std::invalid_argument(
        "build_queue: requires s >= 2 (use naive_set_cover for s = 1)");
  }
  std::uint64_t expansion = 0;
  for (const auto& set : sys.sets) {
    expansion += std::uint64_t{1} << set.size();
    if (expansion > params.subset_budget) {
      throw SizeError("build_queue: subset expansion exceeds budget");
    }
  }

  std::vector<ExpandedTuple> queue;
  for (int s_id = 0; s_id < static_cast<int>(sys.sets.size()); ++s_id) {
    const auto& set = sys.sets[s_id];
    const bool zero = w[s_id] == 0.0;
    const long long index =
        zero ? 0 : compute_index(w[s_id], b, s_max, params.K, params.M);
    const std::size_t size = set.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << size); ++mask) {
      ExpandedTuple tup;
      tup.neg_inf = zero;
      tup.index = index;
      tup.parent = s_id;
      for (std::size_t i = 0; i < size; ++i) {
        if (mask & (std::uint64_t{1} << i)) tup.elements.push_back(set[i]);
      }
      tup.subset_size = static_cast<int>(tup.elements.size());
      if (!zero && !detail::admits_subset(index, tup.subset_size, s_max,
                                          params.K, params.M)) {
        continue;
      }
      queue.push_back(std::move(tup));
    }
  }
  return queue;
}

inline bool is_hashed(long long index, int set_size, int s, int k_param,
                      int m_param) {
  return !detail::admits_subset(index, set_size, s, k_param, m_param);
}

inline std::vector<int> lipschitz_greedy(const SetSystem& sys,
                                         const std::vector<double>& w,
                                         const GreedyParams& params,
                                         const RandomTape& tape) {
  if (!sys.coverable()) {
    throw InfeasibleError("lipschitz_greedy: instance not coverable");
  }
  const double b = sample_fixed(0.0, 1.0, tape, "lg/b");
  auto queue = build_queue(sys, w, params, b);

  const int s_max = sys.max_set_size();
  const double log_s = std::log(double(s_max));
  struct SortEntry {
    double x_float;  // i - M log_s |A|; exact comparison decides near-ties
    double priority;
    const ExpandedTuple* tup;
  };
  std::vector<SortEntry> order(queue.size());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto& t = queue[i];
    const double xf =
        t.neg_inf ? 0.0
                  : double(t.index) -
                        params.M * std::log(double(t.subset_size)) / log_s;
    order[i] = {xf, tie_priority(t.elements, tape), &queue[i]};
  }
  std::sort(order.begin(), order.end(),
            [&](const SortEntry& a, const SortEntry& b2) {
              const auto& ta = *a.tup;
              const auto& tb = *b2.tup;
              if (ta.neg_inf != tb.neg_inf) return ta.neg_inf;
              if (!ta.neg_inf) {
                // Floating keys carry absolute error well under 1e-9; only
                // candidates closer than the margin need the exact route.
                if (std::abs(a.x_float - b2.x_float) > 1e-6) {
                  return a.x_float < b2.x_float;
                }
                const int c = detail::compare_exact(ta.index, ta.subset_size,
                                                    tb.index, tb.subset_size,
                                                    s_max, params.M);
                if (c != 0) return c < 0;
              }
              if (a.priority != b2.priority) return a.priority < b2.priority;
              if (ta.elements != tb.elements) return ta.elements < tb.elements;
              return ta.parent < tb.parent;
            });

  std::vector<char> covered(sys.n_elements, 0);
  std::vector<char> chosen(sys.sets.size(), 0);
  int remaining = sys.n_elements;
  for (const auto& entry : order) {
    if (remaining == 0) break;
    const auto& tup = *entry.tup;
    bool fresh = true;
    for (int e : tup.elements) {
      if (covered[e]) {
        fresh = false;
        break;
      }
    }
    if (!fresh) continue;
    chosen[tup.parent] = 1;
    for (int e : tup.elements) {
      covered[e] = 1;
      --remaining;
    }
  }
  std::vector<int> out;
  for (std::size_t s = 0; s < chosen.size(); ++s) {
    if (chosen[s]) out.push_back(static_cast<int>(s));
  }
  return out;
}

inline std::vector<int> lipschitz_greedy(const SetSystem& sys, double eps,
                                         const RandomTape& tape) {
  return lipschitz_greedy(sys, sys.weights,
                          GreedyParams::from_epsilon(eps, sys.max_set_size()),
                          tape);
}

}  // namespace stablecover
