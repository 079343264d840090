#include "chipscore/token_io.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "chipscore/error.h"
#include "chipscore/rng.h"

namespace chipscore {
namespace {

TEST(TokenFormatTest, RoundTrip) {
  const std::vector<EventSeq> corpus = {{0, 399, 100, 371, 0}, {}, {630}};
  const std::string text = format_tokens(corpus);
  EXPECT_EQ(text, "0 399 100 371 0\n\n630\n");
  EXPECT_EQ(parse_tokens(text), corpus);
  EXPECT_TRUE(parse_tokens("").empty());
}

TEST(TokenFormatTest, ToleratesCrlfAndExtraSpaces) {
  EXPECT_EQ(parse_tokens("0  1\t2 \r\n3\r\n"), (std::vector<EventSeq>{{0, 1, 2}, {3}}));
  EXPECT_EQ(parse_tokens("5"), (std::vector<EventSeq>{{5}}));
}

TEST(TokenFormatTest, ErrorsNameLine) {
  try {
    parse_tokens("0 1\n0 631\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_tokens("0 x\n"), FormatError);
  EXPECT_THROW(parse_tokens("-1\n"), FormatError);
}

TEST(LikelihoodFormatTest, ExactRoundTrip) {
  Rng rng(1);
  std::vector<std::vector<double>> lines(20);
  for (auto& line : lines) {
    const auto n = rng.uniform_int(0, 30);
    for (int i = 0; i < n; ++i) line.push_back(std::log(rng.uniform01() + 1e-300));
  }
  EXPECT_EQ(parse_likelihoods(format_likelihoods(lines)), lines);
  EXPECT_THROW(parse_likelihoods("-1.5 abc\n"), FormatError);
}

TEST(FileIoTest, ReadWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "chipscore_token_io_test";
  std::filesystem::create_directories(dir);
  const std::vector<EventSeq> corpus = {{0, 1, 0}, {0, 2, 0}};
  write_token_file(dir / "t.txt", corpus);
  EXPECT_EQ(read_token_file(dir / "t.txt"), corpus);
  const std::vector<std::uint8_t> bytes = {0, 255, 7};
  write_binary_file(dir / "b.bin", bytes);
  EXPECT_EQ(read_binary_file(dir / "b.bin"), bytes);
  EXPECT_THROW(read_text_file(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(RngTest, PortableSequence) {
  // std::mt19937_64 is fully specified; its 10000th output is fixed by the standard.
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(RngTest, UniformIntCoversRange) {
  Rng rng(3);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform_int(-3, 4);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 4);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(rng.uniform_int(7, 7), 7);
  EXPECT_THROW(rng.uniform_int(2, 1), PreconditionError);
}

TEST(RngTest, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, "a.mid"), derive_seed(1, "b.mid"));
  EXPECT_NE(derive_seed(1, "a.mid"), derive_seed(2, "a.mid"));
  EXPECT_EQ(derive_seed(1, "a.mid"), derive_seed(1, "a.mid"));
  EXPECT_NE(derive_seed(1, std::uint64_t{0}), derive_seed(1, std::uint64_t{1}));
}

}  // namespace
}  // namespace chipscore
