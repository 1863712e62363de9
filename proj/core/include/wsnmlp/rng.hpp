#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace wsnmlp {

// Deterministic pseudo-random stream.
//
// All floating-point variates are derived from raw 64-bit engine output with
// fixed arithmetic, so sequences are bit-reproducible across platforms and
// standard-library versions (std::mt19937_64 output is standardized; the
// std:: distribution front-ends are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * kScale;
  }

  // Uniform on (0, 1), never hits either endpoint.  Suitable for quantile
  // transforms whose endpoints map to +/-infinity.
  double open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * kScale;
  }

  // Uniform on (0, 1].  Bernoulli trials of the form (z > p) built on this
  // draw succeed with probability exactly p at the grid resolution: p = 0
  // can never trigger and p = 1 always does.
  double positive01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * kScale;
  }

  // Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi) { return lo + open01() * (hi - lo); }

  // Uniform integer in [0, n).  Rejection sampling: no modulo bias.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t reject_below = (0 - span) % span;  // 2^64 mod n
    std::uint64_t x = next_u64();
    while (x < reject_below) x = next_u64();
    return static_cast<std::size_t>(x % span);
  }

 private:
  static constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  std::mt19937_64 engine_;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from the master seed, a stream name and
// up to two numeric qualifiers (e.g. link endpoints).  Streams never share
// draws, so adding consumers to one stream cannot shift another.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the stream name
  for (const char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::uint64_t s = splitmix64(master ^ h);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return s;
}

}  // namespace wsnmlp
