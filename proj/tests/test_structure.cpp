#include <gtest/gtest.h>

#include <set>

#include "idxlog/structure.hpp"

using namespace idxlog;

namespace {

// Enumerates {0..b-1}^k by nested counting, independent of lex_rank.
std::vector<Tuple> enumerate_tuples(unsigned k, Elem b) {
  std::vector<Tuple> out;
  Tuple t(k, 0);
  while (true) {
    out.push_back(t);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && t[i] == b - 1) t[i--] = 0;
    if (i < 0) break;
    ++t[i];
  }
  return out;
}

std::uint64_t ipow(std::uint64_t b, unsigned k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

}  // namespace

TEST(LogCeil, Examples) {
  EXPECT_EQ(log_ceil(1), 0u);
  EXPECT_EQ(log_ceil(8), 3u);
  EXPECT_EQ(log_ceil(9), 4u);
  EXPECT_EQ(log_ceil(2), 1u);
  EXPECT_THROW(log_ceil(0), DomainError);
}

TEST(LexRank, Examples) {
  const Tuple a{0, 0}, b{1, 2}, c{3, 3};
  EXPECT_EQ(lex_rank(a, 2, 4), 0u);
  EXPECT_EQ(lex_rank(c, 2, 4), 15u);
  auto all = enumerate_tuples(2, 4);
  auto pos = std::find(all.begin(), all.end(), b) - all.begin();
  EXPECT_EQ(lex_rank(b, 2, 4), static_cast<std::uint64_t>(pos));
  EXPECT_EQ(lex_unrank(0, 2, 4), a);
  EXPECT_EQ(lex_unrank(static_cast<std::uint64_t>(pos), 2, 4), b);
  EXPECT_EQ(lex_unrank(15, 2, 4), c);
}

TEST(LexRank, Errors) {
  const Tuple bad{4, 0};
  EXPECT_THROW(lex_rank(bad, 2, 4), DomainError);
  EXPECT_THROW(lex_unrank(16, 2, 4), DomainError);
}

TEST(LexRank, RoundTripExhaustive) {
  for (Elem b = 1; b <= 6; ++b)
    for (unsigned k = 1; k <= 3; ++k) {
      auto all = enumerate_tuples(k, b);
      for (std::size_t m = 0; m < all.size(); ++m) {
        ASSERT_EQ(lex_rank(all[m], k, b), m);
        ASSERT_EQ(lex_unrank(m, k, b), all[m]);
      }
    }
}

TEST(Validate, Examples) {
  Vocabulary v;
  v.add_relation("P", 1);
  Structure ok(v, 4);
  ok.add_tuple("P", {1});
  EXPECT_TRUE(validate_structure(ok).empty());

  Structure bad(v, 4);
  bad.add_tuple("P", {5});
  auto r = validate_structure(bad);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, Violation::Kind::OutOfRange);

  Vocabulary vf;
  vf.add_function("f", 1);
  Structure partial(vf, 4);
  partial.set_function("f", {0, 1, 2});
  auto r2 = validate_structure(partial);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(r2[0].kind, Violation::Kind::PartialFunction);
}

TEST(Validate, DomainTooSmall) {
  Vocabulary v;
  v.add_relation("P", 1);
  Structure s(v, 1);
  auto r = validate_structure(s);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].kind, Violation::Kind::DomainSize);
}

TEST(Vocabulary, RejectsCollisionsAndZeroArity) {
  Vocabulary v;
  v.add_relation("P", 1);
  EXPECT_THROW(v.add_constant("P"), DomainError);
  EXPECT_THROW(v.add_relation("Q", 0), DomainError);
}

TEST(Encode, Examples) {
  Vocabulary v1;
  v1.add_relation("P", 1);
  EXPECT_EQ(encode_structure(Structure(v1, 2)).str(), "00");

  Vocabulary v2;
  v2.add_relation("P", 1).add_relation("Q", 1);
  Structure s2(v2, 3);
  s2.add_tuple("P", {0});
  s2.add_tuple("Q", {2});
  EXPECT_EQ(encode_structure(s2).str(), "100001");

  Vocabulary v3;
  v3.add_constant("c");
  Structure s3(v3, 8);
  s3.set_constant("c", 5);
  EXPECT_EQ(encode_structure(s3).str(), "101");
}

TEST(Encode, FunctionBlocksMsbFirst) {
  Vocabulary v;
  v.add_function("f", 1);
  Structure s(v, 4);
  s.set_function("f", {1, 2, 3, 0});
  // block 0 = high bits of (1,2,3,0), block 1 = low bits.
  EXPECT_EQ(encode_structure(s).str(), "01101010");
}

TEST(Encode, RejectsInvalid) {
  Vocabulary v;
  v.add_relation("P", 1);
  Structure bad(v, 4);
  bad.add_tuple("P", {7});
  EXPECT_THROW(encode_structure(bad), InvalidStructure);
}

TEST(Encode, LengthMatchesClosedFormOnRandomStructures) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    Vocabulary v;
    std::uniform_int_distribution<int> count(0, 2), ar(1, 2);
    std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, 16)(rng);
    std::uint64_t expected = 0;
    int rels = count(rng), consts = count(rng), funs = count(rng);
    for (int i = 0; i < rels; ++i) {
      unsigned a = ar(rng);
      v.add_relation("R" + std::to_string(i), a);
      expected += ipow(n, a);
    }
    for (int i = 0; i < consts; ++i) {
      v.add_constant("c" + std::to_string(i));
      expected += log_ceil(n);
    }
    for (int i = 0; i < funs; ++i) {
      unsigned a = ar(rng);
      v.add_function("f" + std::to_string(i), a);
      expected += log_ceil(n) * ipow(n, a);
    }
    auto s = random_structure(v, n, rng);
    ASSERT_TRUE(validate_structure(s).empty());
    ASSERT_EQ(encode_structure(s).size(), expected);
    ASSERT_EQ(encoding_length(v, n), expected);
  }
}

TEST(Encode, RelationBitsMatchMembership) {
  Vocabulary v;
  v.add_relation("E", 2);
  for (std::uint64_t n = 2; n <= 3; ++n) {
    for_each_structure(v, n, [&](const Structure& s) {
      auto bits = encode_structure(s);
      auto all = enumerate_tuples(2, static_cast<Elem>(n));
      for (std::size_t m = 0; m < all.size(); ++m) EXPECT_EQ(bits[m], s.holds("E", all[m]));
      return true;
    });
  }
}

TEST(Structures, NumBoundInsideDomain) {
  for (std::uint64_t n = 2; n <= 300; ++n) EXPECT_LE(log_ceil(n), n);
}

TEST(Structures, EnumerationCount) {
  Vocabulary v;
  v.add_relation("P", 1).add_constant("c");
  std::uint64_t seen = 0;
  std::set<std::string> distinct;
  for_each_structure(v, 3, [&](const Structure& s) {
    ++seen;
    distinct.insert(encode_structure(s).str());
    return true;
  });
  EXPECT_EQ(seen, 8u * 3u);
  EXPECT_EQ(count_structures(v, 3), seen);
  EXPECT_EQ(distinct.size(), seen);
}

TEST(BitStringText, ParseAndPrint) {
  auto b = BitString::parse("0110");
  EXPECT_EQ(b.size(), 4u);
  EXPECT_EQ(b.str(), "0110");
  EXPECT_THROW(BitString::parse("01x"), DomainError);
}
