#pragma once

// Keyed source of shared uniform randomness plus the two stable sampling
// processes the covering algorithms need.  Every algorithm in this library is
// a deterministic function of (instance, weights, tape): randomness is
// addressed by string keys such as "vc/z/v=3", so two runs on different
// weight vectors consume identical uniforms for identical logical decisions
// regardless of iteration order.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stablecover {

namespace detail {

// SipHash-2-4 with 64-bit output.  A keyed PRF is exactly the primitive a
// shared tape needs: distinct keys give independent-looking streams and the
// mapping is stable across platforms.
inline std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1,
                               const char* data, std::size_t len) {
  auto rotl = [](std::uint64_t x, int b) {
    return (x << b) | (x >> (64 - b));
  };
  std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
  std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
  std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
  std::uint64_t v3 = 0x7465646279746573ULL ^ k1;
  auto round = [&] {
    v0 += v1;
    v1 = rotl(v1, 13);
    v1 ^= v0;
    v0 = rotl(v0, 32);
    v2 += v3;
    v3 = rotl(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = rotl(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = rotl(v1, 17);
    v1 ^= v2;
    v2 = rotl(v2, 32);
  };
  const std::size_t end = len - (len % 8);
  for (std::size_t i = 0; i < end; i += 8) {
    std::uint64_t m;
    std::memcpy(&m, data + i, 8);
    v3 ^= m;
    round();
    round();
    v0 ^= m;
  }
  std::uint64_t b = static_cast<std::uint64_t>(len) << 56;
  for (std::size_t i = end; i < len; ++i) {
    b |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[i]))
         << (8 * (i - end));
  }
  v3 ^= b;
  round();
  round();
  v0 ^= b;
  v2 ^= 0xff;
  round();
  round();
  round();
  round();
  return v0 ^ v1 ^ v2 ^ v3;
}

}  // namespace detail

// Immutable keyed tape.  uniform(key) is a pure function of (seed, key) with
// value in [0,1).
class RandomTape {
 public:
  explicit RandomTape(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t bits(std::string_view key) const {
    return detail::siphash24(seed_, seed_ ^ 0x9e3779b97f4a7c15ULL, key.data(),
                             key.size());
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform(std::string_view key) const {
    return static_cast<double>(bits(key) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

inline double tape_uniform(const RandomTape& tape, std::string_view key) {
  return tape.uniform(key);
}

// Small fixed-size key builder so hot loops do not allocate.
class TapeKey {
 public:
  TapeKey() { buf_[0] = '\0'; }
  explicit TapeKey(std::string_view prefix) { set(prefix); }

  void set(std::string_view prefix) {
    len_ = prefix.size() < kCap ? prefix.size() : kCap;
    std::memcpy(buf_, prefix.data(), len_);
  }
  TapeKey& append(std::string_view s) {
    std::size_t k = s.size();
    if (len_ + k > kCap) k = kCap - len_;
    std::memcpy(buf_ + len_, s.data(), k);
    len_ += k;
    return *this;
  }
  TapeKey& append(long long v) {
    char tmp[24];
    int k = std::snprintf(tmp, sizeof tmp, "%lld", v);
    return append(std::string_view(tmp, static_cast<std::size_t>(k)));
  }
  std::string_view view() const { return {buf_, len_}; }

 private:
  static constexpr std::size_t kCap = 120;
  char buf_[kCap + 1];
  std::size_t len_ = 0;
};

// 1-stable sampler for a constant interval [l, r]: the output never depends
// on the weight vector, so coupled runs agree with probability one.
inline double sample_fixed(double l, double r, const RandomTape& tape,
                           std::string_view key) {
  if (!(l <= r)) throw std::invalid_argument("sample_fixed: requires l <= r");
  return l + tape.uniform(key) * (r - l);
}

// Stable sampler for ratio intervals [l, c*l] with c > 1 and l depending on
// the input weights.  Anchor-cascade rejection sampling: round k draws a grid
// offset b_k and an acceptance uniform u_k; the anchor a_k is the smallest
// point of the absolute grid {c^(n+b_k) : n integer} that is >= l, which is
// log-uniform on [l, c*l).  Accepting with probability a_k/(c*l) tilts the
// log-uniform anchor into an exactly uniform output:
//   Pr[a <= x | accept] = (c^(log_c(x/l)) - 1)/(c - 1) = (x - l)/((c-1) l).
// The output depends on l only through the anchor's grid-cell membership and
// the acceptance threshold, both of which flip with probability O(dl / l), so
// coupled runs rarely disagree.  Per-round acceptance probability is
// (c-1)/(c ln c).
inline double sample_ratio(double l, double c, const RandomTape& tape,
                           std::string_view key_prefix) {
  if (!(l > 0.0)) throw std::invalid_argument("sample_ratio: requires l > 0");
  if (!(c > 1.0)) throw std::invalid_argument("sample_ratio: requires c > 1");
  const double log_c = std::log(c);
  double anchor = l;
  for (int round = 1; round <= 128; ++round) {
    TapeKey kb(key_prefix);
    kb.append("/k=").append(round).append("/b");
    TapeKey ku(key_prefix);
    ku.append("/k=").append(round).append("/u");
    const double b = tape.uniform(kb.view());
    const double u = tape.uniform(ku.view());
    const double n = std::ceil(std::log(l) / log_c - b);
    anchor = std::exp((n + b) * log_c);
    // Renormalize against rounding in log/exp: anchor must be the minimal
    // grid point >= l, and strictly below c*l.
    while (anchor < l) anchor *= c;
    while (anchor / c >= l) anchor /= c;
    if (anchor >= c * l) anchor = l;
    if (u <= anchor / (c * l)) return anchor;
  }
  // 128 rejections has probability below 1e-30 for any c; returning the last
  // anchor keeps the function total and deterministic.
  return anchor;
}

// Parameters of the two stable-sampler kinds.
struct StableSamplerSpec {
  enum class Kind { kFixedInterval, kRatioInterval };
  Kind kind;
  double l = 0.0;
  double r = 0.0;  // fixed-interval upper end
  double c = 0.0;  // ratio-interval factor, > 1
};

}  // namespace stablecover
