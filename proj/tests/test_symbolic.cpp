#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "confdim/error.hpp"
#include "confdim/symbolic.hpp"
#include "oracle_values.hpp"

using namespace confdim;

namespace {

std::vector<Word> collect(const std::optional<IncidenceMatrix>& m, std::size_t n, std::size_t depth) {
  std::vector<Word> out;
  for (const Word& w : enumerate_admissible(m, n, depth)) out.push_back(w);
  return out;
}

const IncidenceMatrix kFibonacci({{1, 1}, {1, 0}});

}  // namespace

TEST(Word, ParseAndPrintRoundTrip) {
  const Word w{0, 12, 3};
  EXPECT_EQ(w.to_string(), "0.12.3");
  EXPECT_EQ(Word::parse("0.12.3"), w);
  EXPECT_EQ(w.prefix(2), (Word{0, 12}));
  EXPECT_EQ(w.suffix_from(1), (Word{12, 3}));
  EXPECT_EQ(w.prepended(7), (Word{7, 0, 12, 3}));
}

TEST(Enumerate, FullShiftDepthTwo) {
  EXPECT_EQ(collect(std::nullopt, 2, 2), (std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(Enumerate, DepthOneIsTheAlphabet) {
  EXPECT_EQ(collect(std::nullopt, 3, 1), (std::vector<Word>{{0}, {1}, {2}}));
}

TEST(Enumerate, GoldenMeanShiftCount) {
  const auto words = collect(kFibonacci, 2, 3);
  EXPECT_EQ(static_cast<int>(words.size()), oracle::kFibonacciWordsDepth3);
  for (const Word& w : words) EXPECT_TRUE(is_admissible(w, kFibonacci, 2));
  EXPECT_TRUE(std::is_sorted(words.begin(), words.end()));
}

TEST(Enumerate, RejectsZeroArguments) {
  EXPECT_THROW(enumerate_admissible(std::nullopt, 0, 2), Error);
  EXPECT_THROW(enumerate_admissible(std::nullopt, 2, 0), Error);
}

TEST(Enumerate, CountMatchesRealMatrixPower) {
  // Every 0/1 matrix up to 3x3 with no zero row, plus a few 4x4 and 5x5 bands.
  std::vector<IncidenceMatrix> matrices;
  for (std::size_t n = 2; n <= 3; ++n)
    for (unsigned bits = 0; bits < (1u << (n * n)); ++bits) {
      std::vector<std::vector<int>> rows(n, std::vector<int>(n));
      for (std::size_t i = 0; i < n * n; ++i) rows[i / n][i % n] = (bits >> i) & 1u;
      matrices.emplace_back(rows);
    }
  matrices.emplace_back(std::vector<std::vector<int>>{{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}});
  matrices.emplace_back(std::vector<std::vector<int>>{
      {1, 1, 1, 0, 0}, {0, 1, 0, 1, 1}, {1, 0, 0, 0, 1}, {1, 1, 1, 1, 1}, {0, 0, 1, 1, 0}});
  for (const auto& m : matrices)
    for (std::size_t depth = 1; depth <= 8; ++depth) {
      double expected = static_cast<double>(m.size());
      if (depth > 1) {
        expected = 0.0;
        for (double x : m.real_power(depth - 1)) expected += x;
      }
      std::size_t count = 0;
      for (const Word& w : enumerate_admissible(m, m.size(), depth)) {
        (void)w;
        ++count;
      }
      ASSERT_EQ(static_cast<double>(count), expected) << "depth " << depth;
    }
}

TEST(Shift, DropsFirstSymbol) {
  EXPECT_EQ(shift(Word{0, 1, 2}), (Word{1, 2}));
  EXPECT_EQ(shift(Word{0, 0}), (Word{0}));
  try {
    shift(Word{1});
    FAIL() << "expected EmptyWord";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyWord);
  }
}

TEST(ComparisonDistance, Values) {
  EXPECT_EQ(comparison_distance(Word{0, 1, 1, 0}, Word{0, 1, 1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(comparison_distance(Word{0, 1}, Word{0, 0}), std::exp(-1.0));
  EXPECT_DOUBLE_EQ(comparison_distance(Word{1, 0, 0}, Word{0, 1, 1}), 1.0);
  // A proper prefix disagrees right after its end.
  EXPECT_DOUBLE_EQ(comparison_distance(Word{0, 1}, Word{0, 1, 1}), std::exp(-2.0));
}

TEST(ComparisonDistance, UltrametricOnShortWords) {
  std::vector<Word> words;
  for (std::size_t d = 1; d <= 3; ++d)
    for (const Word& w : enumerate_admissible(std::nullopt, 3, d)) words.push_back(w);
  for (const Word& w : enumerate_admissible(std::nullopt, 2, 5)) words.push_back(w);
  for (const auto& x : words)
    for (const auto& y : words) {
      const double xy = comparison_distance(x, y);
      ASSERT_EQ(xy, comparison_distance(y, x));
      ASSERT_LE(xy, 1.0);
      for (const auto& z : words)
        ASSERT_LE(comparison_distance(x, z), std::max(xy, comparison_distance(y, z)) + 1e-15);
    }
}

TEST(Primitivity, FullMatrix) {
  const auto w = finitely_primitive_witness(IncidenceMatrix::full(2), 4);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->length, 1u);
  EXPECT_EQ(w->connectors.size(), 4u);
  EXPECT_EQ(w->connectors.at({1, 1}), (Word{0}));
}

TEST(Primitivity, GoldenMeanMatrix) {
  const auto w = finitely_primitive_witness(kFibonacci, 4);
  ASSERT_TRUE(w);
  EXPECT_EQ(static_cast<int>(w->length), oracle::kFibonacciPrimitivityLength);
  // 1 -> ? -> 1 must pass through 0.
  EXPECT_EQ(w->connectors.at({1, 1}), (Word{0}));
  for (const auto& [pair, word] : w->connectors) {
    Word full = word.prepended(pair.first).appended(pair.second);
    EXPECT_TRUE(is_admissible(full, kFibonacci, 2)) << full.to_string();
  }
}

TEST(Primitivity, ReducibleHasNoWitness) {
  EXPECT_FALSE(finitely_primitive_witness(IncidenceMatrix({{1, 0}, {0, 1}}), 10));
}

TEST(Primitivity, UpwardClosed) {
  const IncidenceMatrix cycle3({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
  const auto w = finitely_primitive_witness(cycle3, 10);
  ASSERT_TRUE(w);
  for (std::size_t p = w->length; p <= 10; ++p) EXPECT_TRUE(cycle3.boolean_power(p + 1).all_positive()) << p;
  EXPECT_FALSE(finitely_primitive_witness(cycle3, w->length - 1));
}
