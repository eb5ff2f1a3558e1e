#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "meshtok/error.hpp"
#include "meshtok/rearrange.hpp"
#include "meshtok/tokenizers.hpp"
#include "oracles.hpp"

using namespace meshtok;

namespace {

std::vector<SymbolId> iota_list(std::size_t n, SymbolId from = 1) {
  std::vector<SymbolId> v(n);
  std::iota(v.begin(), v.end(), from);
  return v;
}

}  // namespace

TEST(RacBlock, NineTrace) {
  EXPECT_EQ(rac_encode_block(iota_list(9)), (std::vector<SymbolId>{1, 4, 7, 2, 5, 8, 3, 6, 9}));
  EXPECT_EQ(rac_encode_full(iota_list(9)), (std::vector<SymbolId>{1, 4, 7, 2, 5, 8, 3, 6, 9}));
  EXPECT_EQ(rac_decode_block(std::vector<SymbolId>{1, 4, 7, 2, 5, 8, 3, 6, 9}), iota_list(9));
}

TEST(RacBlock, ShortBlocks) {
  EXPECT_EQ(rac_encode_block(iota_list(3)), iota_list(3));
  EXPECT_EQ(rac_encode_block(iota_list(6)), (std::vector<SymbolId>{1, 4, 2, 5, 3, 6}));
  EXPECT_TRUE(rac_encode_block({}).empty());
  EXPECT_THROW(rac_encode_block(iota_list(4)), Error);
  EXPECT_EQ(rac_decode_block(iota_list(4)), iota_list(3));
}

TEST(RacFull, TwelveRegroupsPerBlock) {
  EXPECT_EQ(rac_encode_full(iota_list(12)),
            (std::vector<SymbolId>{1, 4, 7, 2, 5, 8, 3, 6, 9, 10, 11, 12}));
  EXPECT_EQ(rac_encode_full(iota_list(15)),
            (std::vector<SymbolId>{1, 4, 7, 2, 5, 8, 3, 6, 9, 10, 13, 11, 14, 12, 15}));
  EXPECT_EQ(rac_decode_full(rac_encode_full(iota_list(12))), iota_list(12));
}

TEST(RacFull, RejectsRaggedInputAndTruncatesOnDecode) {
  EXPECT_THROW(rac_encode_full(iota_list(11)), Error);
  EXPECT_EQ(rac_decode_full(iota_list(11)).size(), 9u);
  EXPECT_EQ(rac_decode_full(iota_list(13)).size(), 12u);
  EXPECT_EQ(rac_decode_full(iota_list(17)).size(), 15u);
  EXPECT_EQ(rac_decode_full(iota_list(8)).size(), 6u);
  EXPECT_EQ(rac_decode_full(iota_list(2)).size(), 0u);
}

TEST(RacFull, MatchesReferenceAndInverts) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len(0, 200);
  std::uniform_int_distribution<SymbolId> coord(0, 127);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<SymbolId> v(3 * len(rng));
    for (auto& x : v) x = coord(rng);
    const auto enc = rac_encode_full(v);
    ASSERT_EQ(enc.size(), v.size());
    ASSERT_EQ(enc, oracle::rac_encode_reference(v));
    ASSERT_EQ(rac_decode_full(enc), v);
    auto a = v;
    auto b = enc;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ASSERT_EQ(a, b);
  }
}

TEST(RearrangeSequence, EdrDirectionsMoveToFront) {
  std::vector<SymbolId> s = iota_list(9);
  s.push_back(kDirN);
  for (SymbolId c : {10u, 11u, 12u}) s.push_back(c);
  s.push_back(kDirP);
  for (SymbolId c : {13u, 14u, 15u}) s.push_back(c);
  s.push_back(kSubEnd);
  const SymbolSequence seq{TokenizerKind::Edr, s};
  const auto r = rearrange_sequence(seq);
  std::vector<SymbolId> want{kDirN, kDirP, 1, 4, 7, 2, 5, 8, 3, 6, 9, 10, 13, 11, 14, 12, 15, kSubEnd};
  EXPECT_EQ(r.symbols, want);
  EXPECT_EQ(unrearrange_sequence(r), seq);
}

TEST(RearrangeSequence, SubEndStaysPut) {
  for (auto kind : {TokenizerKind::Amt, TokenizerKind::Edr}) {
    const auto s = encode(kind, fixtures::icosphere(2));
    const auto r = rearrange_sequence(s);
    ASSERT_EQ(r.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(s.symbols[i] == kSubEnd, r.symbols[i] == kSubEnd) << i;
    }
    EXPECT_EQ(unrearrange_sequence(r), s);
  }
}

TEST(RearrangeSequence, RawIsOneRun) {
  const auto s = raw_encode(fixtures::strip(5));
  const auto r = rearrange_sequence(s);
  EXPECT_EQ(r.symbols, rac_encode_full(s.symbols));
  EXPECT_EQ(unrearrange_sequence(r), s);
}

TEST(RearrangeSequence, EdrCoordinateCountMismatch) {
  std::vector<SymbolId> bad{kDirN, kDirN};
  for (SymbolId c = 1; c <= 12; ++c) bad.push_back(c);
  bad.push_back(kSubEnd);
  const RearrangedSequence r{TokenizerKind::Edr, bad};
  EXPECT_THROW(unrearrange_sequence(r), DecodeError);
  const auto lenient = unrearrange_sequence(r, DecodeMode::Lenient);
  // Seed face plus the one extension whose coordinates are present.
  EXPECT_EQ(lenient.size(), 9u + 4u + 1u);
  EXPECT_EQ(lenient.symbols[9], kDirN);
}

TEST(RearrangeSequence, RoundTripOnCorpus) {
  for (const auto& m : fixtures::corpus(40, 5)) {
    for (auto kind : {TokenizerKind::Raw, TokenizerKind::Amt, TokenizerKind::Edr}) {
      const auto s = encode(kind, m);
      const auto r = rearrange_sequence(s);
      EXPECT_EQ(r.kind, kind);
      EXPECT_EQ(unrearrange_sequence(r), s);
    }
  }
}
