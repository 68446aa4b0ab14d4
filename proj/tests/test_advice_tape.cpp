#include <gtest/gtest.h>

#include "ksl/advice_tape.hpp"
#include "ksl/error.hpp"
#include "ksl/generators.hpp"

using namespace ksl;

TEST(CeilLog2, SmallValues) {
  EXPECT_EQ(ceil_log2(0), 0);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(3), 2);
  EXPECT_EQ(ceil_log2(4), 2);
  EXPECT_EQ(ceil_log2(5), 3);
  EXPECT_EQ(ceil_log2(1ULL << 40), 40);
  EXPECT_EQ(ceil_log2((1ULL << 40) + 1), 41);
}

TEST(AdviceTape, WritesMostSignificantBitFirst) {
  AdviceTape t;
  t.write_uint(5, 3);
  ASSERT_EQ(t.bits_written(), 3u);
  EXPECT_TRUE(t.bit(0));
  EXPECT_FALSE(t.bit(1));
  EXPECT_TRUE(t.bit(2));
  t.write_uint(0, 0);
  EXPECT_EQ(t.bits_written(), 3u);
  EXPECT_EQ(t.read_uint(3), 5u);
}

TEST(AdviceTape, Errors) {
  AdviceTape t;
  try {
    t.write_uint(9, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValueTooWide);
  }
  t.write_uint(1, 1);
  t.read_uint(1);
  try {
    t.read_uint(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTapeExhausted);
  }
}

TEST(AdviceTape, InterleavedRoundTrip) {
  AdviceTape t;
  t.write_uint(1, 1);
  t.write_uint(2, 2);
  EXPECT_EQ(t.read_uint(1), 1u);
  EXPECT_EQ(t.read_uint(2), 2u);
  EXPECT_EQ(t.bits_read(), 3u);
  EXPECT_EQ(t.remaining(), 0u);
}

TEST(AdviceTape, RandomRecordsSurviveHexEncoding) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    AdviceTape t;
    std::vector<std::pair<std::uint64_t, int>> records;
    const int count = static_cast<int>(rng.uniform(0, 40));
    for (int i = 0; i < count; ++i) {
      const int width = static_cast<int>(rng.uniform(0, 64));
      const std::uint64_t value = width == 0 ? 0 : (width == 64 ? rng.next() : rng.next() >> (64 - width));
      records.push_back({value, width});
      t.write_uint(value, width);
    }
    AdviceTape back = AdviceTape::from_hex(t.to_hex(), t.bits_written());
    EXPECT_EQ(back, t);
    for (auto [value, width] : records) ASSERT_EQ(back.read_uint(width), value);
    EXPECT_EQ(back.remaining(), 0u);
    back.rewind();
    EXPECT_EQ(back.read_cursor(), 0u);
  }
}

TEST(AdviceTape, RejectsMalformedHex) {
  EXPECT_THROW(AdviceTape::from_hex("zz", 8), Error);
  EXPECT_THROW(AdviceTape::from_hex("ff", 17), Error);
}
