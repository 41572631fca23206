#pragma once

#include <cmath>
#include <cstdint>

namespace anybnb {

// splitmix64. Small state, full avalanche, and cheap enough to reseed per
// tree node, which is what makes hash-keyed substreams practical.
inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-independent key derivation: mix_key(parent_key, child_index) seeds
// the child's own stream, so expanding nodes in any order reproduces the
// same tree.
inline constexpr std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = b;
  std::uint64_t t = a ^ splitmix64_next(s);
  return splitmix64_next(t);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() { return splitmix64_next(state_); }

  // [0, 1) with 53 random bits
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // unbiased integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t v = next();
      if (v >= threshold) return v % n;
    }
  }

  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {  // inclusive range
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Knuth's product method; fine for the small means used here
  std::uint32_t next_poisson(double mean) {
    double limit = std::exp(-mean);
    double p = 1.0;
    std::uint32_t k = 0;
    do {
      ++k;
      p *= next_unit();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace anybnb
