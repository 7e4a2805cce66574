#include <gtest/gtest.h>

#include <set>
#include <string>

#include "ncschur/words.hpp"

using namespace ncschur;

namespace {

std::set<std::string> names(const WordSet& ws) {
  std::set<std::string> out;
  for (const auto& w : ws) out.insert(w.to_string());
  return out;
}

}  // namespace

TEST(FpWords, InSequenceOrder) {
  EXPECT_EQ(names(fp_words({0, 1})), (std::set<std::string>{"x0", "x1", "x0.x1"}));
  EXPECT_EQ(names(fp_words({1, 0})), (std::set<std::string>{"x1", "x0", "x1.x0"}));
  EXPECT_EQ(names(fp_words({0})), (std::set<std::string>{"x0"}));
}

TEST(DirectedProduct, ForwardAndBackward) {
  EXPECT_EQ(directed_product_word({1, 3}, Direction::Forward).to_string(), "x1.x3");
  EXPECT_EQ(directed_product_word({1, 3}, Direction::Backward).to_string(), "x3.x1");
  EXPECT_EQ(directed_product_word({2}, Direction::Forward).to_string(), "x2");
}

TEST(PatternWords, SmallK) {
  EXPECT_EQ(names(pattern_words(0)), (std::set<std::string>{"x0"}));
  EXPECT_EQ(names(pattern_words(1)), (std::set<std::string>{"x0", "x1", "x0.x1", "x1.x0"}));
}

TEST(PatternWords, TwoVariablesMissFive) {
  const auto w = pattern_words(2);
  EXPECT_EQ(w.size(), 10u);
  std::set<std::string> missing;
  for (const auto& x : all_distinct_products(3))
    if (!w.count(x)) missing.insert(x.to_string());
  EXPECT_EQ(all_distinct_products(3).size(), 15u);
  // x = x0, y = x1, z = x2: {xz, zy, xzy, yxz, zyx}
  EXPECT_EQ(missing, (std::set<std::string>{"x0.x2", "x2.x1", "x0.x2.x1", "x1.x0.x2", "x2.x1.x0"}));
}

TEST(PatternWords, Limits) {
  EXPECT_THROW(pattern_words(-1), InvalidInput);
  EXPECT_THROW(pattern_words(kMaxPatternK + 1), InvalidInput);
  EXPECT_NO_THROW(pattern_words(kMaxPatternK));
}

TEST(PatternWords, CountsGrow) {
  for (int k = 0; k <= 4; ++k) {
    const auto w = pattern_words(k);
    for (const auto& x : w) EXPECT_LE(x.max_var(), k);
    if (k) {
      EXPECT_GT(w.size(), pattern_words(k - 1).size());
    }
  }
}

TEST(EvalWord, Examples) {
  auto g = build_group("sym:3");
  const Element t = g.element("(1,2)"), c = g.element("(1,2,3)");
  const std::vector<Element> a{t};
  EXPECT_EQ(eval_word(Word{0}, a, g), t);
  const std::vector<Element> b{t, g.identity()};
  EXPECT_EQ(eval_word(Word{0, 1}, b, g), t);
  const std::vector<Element> d{t, c};
  EXPECT_NE(eval_word(Word{0, 1}, d, g), eval_word(Word{1, 0}, d, g));
}

TEST(Word, ParseRoundTrip) {
  for (const auto& w : pattern_words(3)) EXPECT_EQ(Word::parse(w.to_string()), w);
  EXPECT_THROW(Word::parse("x0.x0"), InvalidInput);
}
