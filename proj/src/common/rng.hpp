#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "common/error.hpp"

namespace argpair {

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seeded generator with a fixed bit-to-double mapping, so frozen test
// constants stay valid across standard library versions. Named substreams
// keep independent consumers (init, shuffle, gumbel, dropout, ...) from
// perturbing each other's draws.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  uint64_t next() { return gen_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {
    if (n <= 0) throw internal_error("Rng::uniform_int: n must be positive");
    return static_cast<int>(next() % static_cast<uint64_t>(n));
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
  }

  // Standard Gumbel draw: -log(-log(u)), u ~ Uniform(0,1) clamped off 0 and 1.
  double gumbel() {
    double u = uniform();
    if (u < 1e-12) u = 1e-12;
    if (u > 1.0 - 1e-12) u = 1.0 - 1e-12;
    return -std::log(-std::log(u));
  }

  Rng stream(std::string_view tag) const { return Rng(splitmix64(seed_ ^ fnv1a64(tag))); }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace argpair
