#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "mousedyn/rng.hpp"

using namespace mousedyn;

// Reference values from an independent implementation of splitmix64 and
// xoshiro256**.
TEST(Rng, SplitmixReferenceDraw) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
}

TEST(Rng, XoshiroPinnedDraws) {
  Rng zero(0);
  EXPECT_EQ(zero.next(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(zero.next(), 0xbf6e1f784956452aULL);
  EXPECT_EQ(zero.next(), 0x1a5f849d4933e6e0ULL);
  EXPECT_EQ(zero.next(), 0x6aa594f1262d2d2cULL);

  Rng fortytwo(42);
  EXPECT_EQ(fortytwo.next(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(fortytwo.next(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(fortytwo.next(), 0xae17533239e499a1ULL);
  EXPECT_EQ(fortytwo.next(), 0xecb8ad4703b360a1ULL);
}

TEST(Rng, DeriveSeedPinned) { EXPECT_EQ(derive_seed(42, 3), 0x43aa8652ad94b3a2ULL); }

TEST(Rng, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.uniform_index(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (const int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(rng.uniform_index(1), 0u);
}

TEST(Rng, Uniform01InUnitInterval) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, ShuffleIsSeededPermutation) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Rng r1(9), r2(9);
  r1.shuffle(std::span(a));
  r2.shuffle(std::span(b));
  EXPECT_EQ(a, b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}
