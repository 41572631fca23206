#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>

#include "anybnb/rng.hpp"

using namespace anybnb;

TEST_CASE("splitmix64 matches the reference sequence", "[rng]") {
  // first outputs for seed 0, from the published reference implementation
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
}

TEST_CASE("same seed reproduces the stream, different seeds diverge", "[rng]") {
  SplitMix64 a(42), b(42), c(43);
  int differing = 0;
  for (int i = 0; i < 100; ++i) {
    auto va = a.next();
    CHECK(va == b.next());
    if (va != c.next()) ++differing;
  }
  CHECK(differing > 90);
}

TEST_CASE("mix_key is stable and separates inputs", "[rng]") {
  CHECK(mix_key(1, 2) == mix_key(1, 2));
  std::set<std::uint64_t> keys;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 50; ++b) keys.insert(mix_key(a, b));
  CHECK(keys.size() == 50 * 50);
}

TEST_CASE("next_below stays in range and is roughly uniform", "[rng]") {
  SplitMix64 rng(7);
  const int n = 100000;
  int buckets[10] = {};
  for (int i = 0; i < n; ++i) {
    auto v = rng.next_below(10);
    REQUIRE(v < 10);
    ++buckets[v];
  }
  for (int count : buckets) {
    CHECK(count > 10000 - 500);  // ~5 standard deviations
    CHECK(count < 10000 + 500);
  }
}

TEST_CASE("next_int covers an inclusive range", "[rng]") {
  SplitMix64 rng(11);
  int lo_seen = 100, hi_seen = -100;
  for (int i = 0; i < 10000; ++i) {
    auto v = rng.next_int(-3, 3);
    REQUIRE(v >= -3);
    REQUIRE(v <= 3);
    lo_seen = std::min<int>(lo_seen, static_cast<int>(v));
    hi_seen = std::max<int>(hi_seen, static_cast<int>(v));
  }
  CHECK(lo_seen == -3);
  CHECK(hi_seen == 3);
}

TEST_CASE("next_unit lies in [0,1) with the right mean", "[rng]") {
  SplitMix64 rng(13);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("poisson sampler has the right moments", "[rng]") {
  SplitMix64 rng(17);
  const int n = 100000;
  const double mean = 3.0;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = rng.next_poisson(mean);
    sum += v;
    sum_sq += v * v;
  }
  double m = sum / n;
  double var = sum_sq / n - m * m;
  CHECK(std::abs(m - mean) < 0.05);    // ~9 standard errors
  CHECK(std::abs(var - mean) < 0.15);
  CHECK(SplitMix64(1).next_poisson(0.0) == 0);
}
