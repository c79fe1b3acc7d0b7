#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gaplab/rng.hpp"

using gaplab::Rng;

TEST(Rng, MixIsBijectiveOnSample) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(gaplab::mix64(i));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Rng, MixKnownValue) {
  // splitmix64 finalizer: first output of a splitmix64 stream seeded with 0.
  EXPECT_EQ(gaplab::mix64(0x9E3779B97F4A7C15ull), 0xE220A8397B1DCDAFull);
}

TEST(Rng, SplitSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 5000; ++i) seeds.insert(gaplab::split_seed(42, i));
  EXPECT_EQ(seeds.size(), 5000u);
  EXPECT_EQ(gaplab::split_seed(42, 7), gaplab::split_seed(42, 7));
  EXPECT_NE(gaplab::split_seed(42, 7), gaplab::split_seed(43, 7));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformRangeAndMoments) {
  Rng r(1);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(Rng, OpenUniformNeverHitsEndpoints) {
  Rng r(2);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(3);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(Rng, ComplexNormalHasUnitModulusSquaredMean) {
  Rng r(4);
  const int n = 100000;
  double s = 0.0, re2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = r.complex_normal();
    s += std::norm(z);
    re2 += z.real() * z.real();
  }
  EXPECT_NEAR(s / n, 1.0, 0.02);
  EXPECT_NEAR(re2 / n, 0.5, 0.01);
}
