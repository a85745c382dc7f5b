#pragma once

// Instance data model, JSON file formats, and reproducible generators.
//
// Graph JSON:      {"n": int, "edges": [[int,int]...], "weights": [float...]}
// Set system JSON: {"n": int, "sets": [[int...]...], "weights": [float...]}

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace stablecover {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CycleOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simple undirected graph with nonnegative real vertex weights.
struct WeightedGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> weights;

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return adj;
  }

  // Edge ids incident to each vertex.
  std::vector<std::vector<int>> incidence() const {
    std::vector<std::vector<int>> inc(n);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      inc[edges[e].first].push_back(e);
      inc[edges[e].second].push_back(e);
    }
    return inc;
  }

  void validate() const {
    if (n < 0) throw ValidationError("graph: n must be nonnegative");
    if (static_cast<int>(weights.size()) != n) {
      throw ValidationError("graph: weights size " +
                            std::to_string(weights.size()) +
                            " does not match n=" + std::to_string(n));
    }
    for (int v = 0; v < n; ++v) {
      if (!(weights[v] >= 0.0) || !std::isfinite(weights[v])) {
        throw ValidationError("graph: weight of vertex " + std::to_string(v) +
                              " must be finite and >= 0");
      }
    }
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n) {
        throw ValidationError("graph: edge endpoint out of range");
      }
      if (u == v) {
        throw ValidationError("graph: self-loop at vertex " +
                              std::to_string(u));
      }
      auto key = std::minmax(u, v);
      if (!seen.insert(key).second) {
        throw ValidationError("graph: duplicate edge (" + std::to_string(u) +
                              "," + std::to_string(v) + ")");
      }
    }
  }
};

// Universe, set family and nonnegative set weights; s and f are recomputed
// from the family and never trusted from input.
struct SetSystem {
  int n_elements = 0;
  std::vector<std::vector<int>> sets;
  std::vector<double> weights;

  int max_set_size() const {
    std::size_t s = 0;
    for (const auto& set : sets) s = std::max(s, set.size());
    return static_cast<int>(s);
  }

  int max_frequency() const {
    std::vector<int> freq(n_elements, 0);
    for (const auto& set : sets) {
      for (int e : set) ++freq[e];
    }
    int f = 0;
    for (int c : freq) f = std::max(f, c);
    return f;
  }

  // Sets containing each element.
  std::vector<std::vector<int>> covering_sets() const {
    std::vector<std::vector<int>> cov(n_elements);
    for (int s = 0; s < static_cast<int>(sets.size()); ++s) {
      for (int e : sets[s]) cov[e].push_back(s);
    }
    return cov;
  }

  bool coverable() const {
    std::vector<char> hit(n_elements, 0);
    for (const auto& set : sets) {
      for (int e : set) hit[e] = 1;
    }
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }

  void validate() const {
    if (n_elements < 0) throw ValidationError("set system: n must be >= 0");
    if (weights.size() != sets.size()) {
      throw ValidationError("set system: weights size does not match family");
    }
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ValidationError("set system: weights must be finite and >= 0");
      }
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].empty()) {
        throw ValidationError("set system: set " + std::to_string(i) +
                              " is empty");
      }
      std::set<int> dedup;
      for (int e : sets[i]) {
        if (e < 0 || e >= n_elements) {
          throw ValidationError("set system: element id " + std::to_string(e) +
                                " out of range in set " + std::to_string(i));
        }
        if (!dedup.insert(e).second) {
          throw ValidationError("set system: duplicate element in set " +
                                std::to_string(i));
        }
      }
    }
  }
};

// ---------------------------------------------------------------------------
// JSON parsing and serialization
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T get_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) {
    throw ParseError(std::string("missing field \"") + name + "\"");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field \"") + name + "\": " + e.what());
  }
}

}  // namespace detail

inline WeightedGraph parse_graph(const std::string& text) {
  const auto j = detail::parse_json(text);
  WeightedGraph g;
  g.n = detail::get_field<int>(j, "n");
  g.edges = detail::get_field<std::vector<std::pair<int, int>>>(j, "edges");
  g.weights = detail::get_field<std::vector<double>>(j, "weights");
  g.validate();
  return g;
}

inline SetSystem parse_set_system(const std::string& text) {
  const auto j = detail::parse_json(text);
  SetSystem sys;
  sys.n_elements = detail::get_field<int>(j, "n");
  sys.sets = detail::get_field<std::vector<std::vector<int>>>(j, "sets");
  sys.weights = detail::get_field<std::vector<double>>(j, "weights");
  sys.validate();
  for (auto& set : sys.sets) std::sort(set.begin(), set.end());
  return sys;
}

inline std::string serialize_graph(const WeightedGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["edges"] = g.edges;
  j["weights"] = g.weights;
  return j.dump();
}

inline std::string serialize_set_system(const SetSystem& sys) {
  nlohmann::json j;
  j["n"] = sys.n_elements;
  j["sets"] = sys.sets;
  j["weights"] = sys.weights;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Reproducible generators
// ---------------------------------------------------------------------------

struct WeightDist {
  enum class Kind { kUniform, kExponential };
  Kind kind = Kind::kUniform;
  double a = 0.5;   // uniform lower bound
  double b = 2.0;   // uniform upper bound
  double rate = 1.0;
};

// Seed fully determines the output, bit for bit.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  int n = 0;       // vertices / elements
  int m = 0;       // sets (set systems only)
  double p = 0.5;  // edge probability (graphs only)
  int s = 2;       // max set size (set systems only)
  int f = 2;       // max element frequency (set systems only)
  WeightDist wdist;
};

namespace detail {

// splitmix64: a fully specified stream so generated instances are
// bit-reproducible across platforms (std distributions are not).
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

inline double draw_weight(const WeightDist& d, DetRng& rng) {
  switch (d.kind) {
    case WeightDist::Kind::kUniform:
      return d.a + rng.uniform() * (d.b - d.a);
    case WeightDist::Kind::kExponential:
      return -std::log1p(-rng.uniform()) / d.rate;
  }
  return 0.0;
}

}  // namespace detail

inline WeightedGraph gen_graph(const GeneratorConfig& cfg) {
  if (cfg.n < 0) throw ConfigError("gen_graph: n must be >= 0");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) {
    throw ConfigError("gen_graph: edge probability must lie in [0,1]");
  }
  detail::DetRng rng(cfg.seed ^ 0x67726170680aULL);
  WeightedGraph g;
  g.n = cfg.n;
  for (int u = 0; u < cfg.n; ++u) {
    for (int v = u + 1; v < cfg.n; ++v) {
      if (rng.uniform() < cfg.p) g.edges.emplace_back(u, v);
    }
  }
  g.weights.resize(cfg.n);
  for (int v = 0; v < cfg.n; ++v) {
    g.weights[v] = detail::draw_weight(cfg.wdist, rng);
  }
  g.validate();
  return g;
}

// Feasibility by construction: cover U with a random partition into sets of
// size <= s, then add random extra sets under the frequency cap.
inline SetSystem gen_set_system(const GeneratorConfig& cfg) {
  if (cfg.n <= 0) throw ConfigError("gen_set_system: n must be > 0");
  if (cfg.s < 1 || cfg.f < 1) {
    throw ConfigError("gen_set_system: requires s >= 1 and f >= 1");
  }
  if (static_cast<long long>(cfg.m) * cfg.s < cfg.n) {
    throw ConfigError("gen_set_system: infeasible, m*s < n");
  }
  const int partition_sets = (cfg.n + cfg.s - 1) / cfg.s;
  const long long extras = cfg.m - partition_sets;
  if (extras < 0) {
    throw ConfigError("gen_set_system: m too small to partition n elements");
  }
  if (extras > 0 && static_cast<long long>(cfg.n) * (cfg.f - 1) < extras) {
    throw ConfigError(
        "gen_set_system: frequency cap leaves no room for extra sets");
  }

  detail::DetRng rng(cfg.seed ^ 0x73657473797374ULL);
  std::vector<int> perm(cfg.n);
  for (int i = 0; i < cfg.n; ++i) perm[i] = i;
  for (int i = cfg.n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }

  SetSystem sys;
  sys.n_elements = cfg.n;
  std::vector<int> freq(cfg.n, 0);
  for (int i = 0; i < cfg.n; i += cfg.s) {
    std::vector<int> set(perm.begin() + i,
                         perm.begin() + std::min(i + cfg.s, cfg.n));
    std::sort(set.begin(), set.end());
    for (int e : set) ++freq[e];
    sys.sets.push_back(std::move(set));
  }
  long long spare = 0;
  for (int e = 0; e < cfg.n; ++e) spare += cfg.f - freq[e];
  for (long long k = 0; k < extras; ++k) {
    std::vector<int> avail;
    for (int e = 0; e < cfg.n; ++e) {
      if (freq[e] < cfg.f) avail.push_back(e);
    }
    // Leave at least one spare slot for each remaining extra set.
    const long long max_size =
        std::min<long long>({cfg.s, static_cast<long long>(avail.size()),
                             spare - (extras - k - 1)});
    const int size =
        1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size)));
    spare -= size;
    std::vector<int> set;
    for (int i = 0; i < size; ++i) {
      const std::size_t j =
          i + rng.below(static_cast<std::uint64_t>(avail.size() - i));
      std::swap(avail[i], avail[j]);
      set.push_back(avail[i]);
    }
    std::sort(set.begin(), set.end());
    for (int e : set) ++freq[e];
    sys.sets.push_back(std::move(set));
  }
  sys.weights.resize(sys.sets.size());
  for (auto& w : sys.weights) w = detail::draw_weight(cfg.wdist, rng);
  sys.validate();
  return sys;
}

}  // namespace stablecover
