#include <gtest/gtest.h>

#include "uea/bitstring.hpp"

namespace {

using uea::BitString;

TEST(BitString, ParsesAndPrints) {
  const auto x = BitString::from_string("01101");
  EXPECT_EQ(x.size(), 5u);
  EXPECT_EQ(x.count_ones(), 3u);
  EXPECT_FALSE(x[0]);
  EXPECT_TRUE(x[1]);
  EXPECT_EQ(x.to_string(), "01101");
}

TEST(BitString, RejectsNonBinaryText) {
  EXPECT_THROW(BitString::from_string("01x"), uea::Error);
}

TEST(BitString, CachedPopcountTracksEveryMutation) {
  uea::Rng rng(3);
  BitString x = BitString::random(130, rng);
  for (int step = 0; step < 2000; ++step) {
    const std::size_t i = uea::uniform_below(rng, 130);
    if (step % 3 == 0) {
      x.set(i, step % 2 == 0);
    } else {
      x.flip(i);
    }
    if (step % 97 == 0) x.complement_in_place();
    std::size_t ones = 0;
    for (std::size_t k = 0; k < x.size(); ++k) ones += x.test(k);
    ASSERT_EQ(x.count_ones(), ones);
  }
}

TEST(BitString, ComplementAndHamming) {
  const auto x = BitString::from_string("1100101");
  const auto y = x.complement();
  EXPECT_EQ(y.to_string(), "0011010");
  EXPECT_EQ(x.hamming(y), 7u);
  EXPECT_EQ(x.hamming(x), 0u);
  EXPECT_THROW((void)x.hamming(BitString::ones(3)), uea::Error);
}

TEST(BitString, IndexRoundTrip) {
  for (std::uint64_t v = 0; v < 256; ++v) {
    const auto x = BitString::from_index(8, v);
    EXPECT_EQ(x.to_index(), v);
    EXPECT_EQ(x.count_ones(), static_cast<std::size_t>(__builtin_popcountll(v)));
  }
}

TEST(BitString, TailBitsStayClearAfterComplement) {
  auto x = BitString::zeros(70);
  x.complement_in_place();
  EXPECT_EQ(x.count_ones(), 70u);
  EXPECT_EQ(x, BitString::ones(70));
}

TEST(Distance, Examples) {
  EXPECT_EQ(uea::distance(BitString::from_string("1111")), 0u);
  EXPECT_EQ(uea::distance(BitString::from_string("0110")), 2u);
  EXPECT_EQ(uea::distance(BitString::from_string("11101")), 1u);
}

TEST(Distance, InvariantUnderComplement) {
  for (std::uint64_t v = 0; v < 1024; ++v) {
    const auto x = BitString::from_index(10, v);
    EXPECT_EQ(uea::distance(x), uea::distance(x.complement()));
    EXPECT_LE(uea::distance(x), 5u);
  }
}

}  // namespace
