#include <gtest/gtest.h>

#include <cmath>
#include <unordered_set>

#include "walklab/rng.hpp"

namespace walklab {
namespace {

// Expected values computed with tests/oracles/rng_oracle.py.
TEST(RngStream, MatchesReferenceOracle) {
  RngStream a = new_stream(42, 0);
  EXPECT_EQ(a.state()[0], 0xbdd732262feb6e95ULL);
  EXPECT_EQ(a.state()[3], 0x581ce1ff0e4ae394ULL);
  EXPECT_EQ(a.next_u64(), 0xd0764d4f4476689fULL);
  EXPECT_EQ(a.next_u64(), 0x519e4174576f3791ULL);
  EXPECT_EQ(a.next_u64(), 0xfbe07cfb0c24ed8cULL);

  RngStream b = new_stream(42, 1);
  EXPECT_EQ(b.next_u64(), 0x1acd42e57001b8b5ULL);

  RngStream c = new_stream(20240917, 5);
  EXPECT_EQ(c.next_u64(), 0xcc23bcf56d638671ULL);
  EXPECT_DOUBLE_EQ(c.uniform_unit(), 0.2524005246862029);
}

TEST(RngStream, SameKeyReplaysBitForBit) {
  RngStream a = new_stream(42, 0);
  RngStream b = new_stream(42, 0);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64()) << "draw " << i;
}

TEST(RngStream, NeighbouringPathsDiffer) {
  RngStream a = new_stream(42, 0);
  RngStream b = new_stream(42, 1);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(RngStream, ZeroSeedEscapesAllZeroState) {
  const RngStream s = new_stream(0, 0);
  const auto& st = s.state();
  EXPECT_NE(st[0] | st[1] | st[2] | st[3], 0u);
  EXPECT_EQ(st[0], 0xe220a8397b1dcdafULL);
}

TEST(RngStream, NoInitialStateCollisionsOverAMillionPaths) {
  std::unordered_set<std::uint64_t> first_words;
  std::unordered_set<std::uint64_t> all_words;
  first_words.reserve(1'000'000);
  all_words.reserve(4'000'000);
  for (std::uint64_t p = 0; p < 1'000'000; ++p) {
    const RngStream s = new_stream(123456789, p);
    ASSERT_TRUE(first_words.insert(s.state()[0]).second) << "collision at path " << p;
    // No path's state may reuse a word of another path's state (no shifted copies).
    for (auto w : s.state()) ASSERT_TRUE(all_words.insert(w).second) << "shared word at path " << p;
  }
}

TEST(Uniforms, BitMappingEdgeCases) {
  EXPECT_EQ(signed_from_bits(0), -1.0);
  EXPECT_EQ(signed_from_bits(0x7FFULL), -1.0);  // low 11 bits are discarded
  EXPECT_EQ(signed_from_bits(std::uint64_t{1} << 63), 0.0);  // top 53 bits = 2^52
  EXPECT_EQ(unit_from_bits(0), 0.0);
  EXPECT_LT(unit_from_bits(~std::uint64_t{0}), 1.0);
  EXPECT_LT(signed_from_bits(~std::uint64_t{0}), 1.0);
}

TEST(Uniforms, EachCallAdvancesOneDraw) {
  RngStream a = new_stream(9, 9);
  RngStream b = a;
  const double u = a.uniform_unit();
  EXPECT_EQ(u, unit_from_bits(b.next_u64()));
  EXPECT_EQ(a.state(), b.state());
  const auto before = a.state();
  (void)a.uniform_unit();
  EXPECT_NE(a.state(), before);
  (void)a.uniform_signed();
  (void)b.next_u64();
  (void)b.next_u64();
  EXPECT_EQ(a.state(), b.state());
}

TEST(Uniforms, SampleMeansAndRange) {
  RngStream s = new_stream(2024, 3);
  double sum_signed = 0.0;
  double sum_unit = 0.0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = s.uniform_signed();
    ASSERT_GE(u, -1.0);
    ASSERT_LE(u, 1.0);
    sum_signed += u;
    const double v = s.uniform_unit();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum_unit += v;
  }
  EXPECT_NEAR(sum_signed / kDraws, 0.0, 0.004);
  EXPECT_NEAR(sum_unit / kDraws, 0.5, 0.001);
}

}  // namespace
}  // namespace walklab
