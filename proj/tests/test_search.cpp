#include <gtest/gtest.h>

#include "ncschur/search.hpp"
#include "oracles.hpp"

using namespace ncschur;

namespace {

std::vector<bool> as_bools(const ElementSet& s) {
  std::vector<bool> v(s.universe());
  for (Element e : s.elements()) v[e] = true;
  return v;
}

std::uint64_t count(const FiniteGroup& g, const Coloring& c, int k, bool noncommuting = false) {
  SearchOptions o;
  o.k = k;
  o.noncommuting = noncommuting;
  return count_pattern_instances(g, c, o);
}

}  // namespace

TEST(Search, SymThreeOneColor) {
  auto g = build_group("sym:3");
  auto c = Coloring::constant(g, 1);
  EXPECT_EQ(count(g, c, 1, true), 18u);
  EXPECT_EQ(count(g, c, 1, false), 36u);
  SearchOptions o;
  o.noncommuting = true;
  auto found = find_pattern_instances(g, c, o);
  ASSERT_EQ(found.size(), 18u);
  for (const auto& inst : found) EXPECT_TRUE(validate_instance(g, c, inst, 1, true));
}

TEST(Search, AbelianGroupsHaveNoNoncommutingInstances) {
  for (int n : {1, 5, 12}) {
    auto g = build_group("cyclic:" + std::to_string(n));
    EXPECT_EQ(count(g, Coloring::constant(g, 1), 1, true), 0u);
  }
}

TEST(Search, MatchesOracleOnLibrary) {
  for (const auto& spec : group_library(16)) {
    SCOPED_TRACE(spec);
    auto g = build_group(spec);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto c = Coloring::random(g, 2 + seed % 2, seed);
      EXPECT_EQ(count(g, c, 0), oracle::pattern_count_k0(g));
      EXPECT_EQ(count(g, c, 1), oracle::pattern_count_k1(g, c.colors(), false));
      EXPECT_EQ(count(g, c, 1, true), oracle::pattern_count_k1(g, c.colors(), true));
    }
  }
}

TEST(Search, MatchesOracleForTwoVariables) {
  for (const char* spec : {"sym:3", "dihedral:4", "cyclic:7", "cyclic:2*sym:3"}) {
    SCOPED_TRACE(spec);
    auto g = build_group(spec);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto c = Coloring::random(g, 2, seed);
      EXPECT_EQ(count(g, c, 2), oracle::pattern_count_k2(g, c.colors()));
    }
  }
}

TEST(Search, ThreadedCountAgrees) {
  auto g = build_group("sym:4");
  auto c = Coloring::random(g, 2, 9);
  SearchOptions o;
  o.k = 2;
  const auto serial = count_pattern_instances(g, c, o);
  o.threads = 4;
  EXPECT_EQ(count_pattern_instances(g, c, o), serial);
}

TEST(Search, LimitTruncatesInOrder) {
  auto g = build_group("sym:3");
  auto c = Coloring::constant(g, 1);
  SearchOptions o;
  auto all = find_pattern_instances(g, c, o);
  o.limit = 5;
  auto some = find_pattern_instances(g, c, o);
  ASSERT_EQ(some.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(some[i].assignment, all[i].assignment);
}

TEST(Search, BudgetIsEnforced) {
  auto g = build_group("sym:5");
  SearchOptions o;
  o.k = 3;
  o.budget = 1000;
  EXPECT_THROW(count_pattern_instances(g, Coloring::constant(g, 1), o), BudgetExceeded);
}

TEST(Search, ValidateRejectsWrongColor) {
  auto g = build_group("sym:3");
  auto c = Coloring::random(g, 2, 4);
  SearchOptions o;
  o.limit = 1;
  auto inst = find_pattern_instances(g, c, o).at(0);
  inst.color = 1 - inst.color;
  EXPECT_FALSE(validate_instance(g, c, inst, 1, false));
}

TEST(Many, OuterDensity) {
  auto g = build_group("sym:3");
  auto c = Coloring::constant(g, 1);
  SearchOptions o;
  EXPECT_EQ(many_statistic(g, c, o).outer_density, 1);
  o.noncommuting = true;
  const auto rep = many_statistic(g, c, o);
  EXPECT_EQ(rep.outer_density, make_rational(5, 6));
  EXPECT_EQ(rep.instances, 18u);
  EXPECT_EQ(many_nesting_order(2), (std::vector<int>{1, 2, 0}));
}

TEST(FpCount, SubgroupOfZ4) {
  auto g = build_group("cyclic:4");
  FpCountOptions o;
  auto rep = fp_tuple_count(g, ElementSet(4, {0, 2}), o);
  EXPECT_EQ(rep.count, 4);
  EXPECT_EQ(rep.expected, 2);
  ASSERT_TRUE(rep.ratio);
  EXPECT_EQ(*rep.ratio, 2);
}

TEST(FpCount, MatchesOracleBothDirections) {
  auto g = build_group("sym:4");
  Xorshift64Star rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_set(g, 12, rng);
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      FpCountOptions o;
      o.direction = dir;
      EXPECT_EQ(fp_tuple_count(g, a, o).count, oracle::fp_pairs(g, as_bools(a), dir == Direction::Backward));
    }
  }
}

TEST(FpCount, SamplingIsSeeded) {
  auto g = build_group("sym:4");
  FpCountOptions o;
  o.k = 2;
  o.force_sampling = true;
  o.samples = 2000;
  o.seed = 3;
  auto a = ElementSet(g.order(), {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  auto r1 = fp_tuple_count(g, a, o), r2 = fp_tuple_count(g, a, o);
  EXPECT_TRUE(r1.sampled);
  EXPECT_EQ(r1.hits, r2.hits);
  EXPECT_EQ(r1.samples, 2000u);
}

TEST(Mixing, SubgroupOfZ60) {
  auto g = build_group("cyclic:60");
  ElementSet h(60);
  for (Element e = 0; e < 60; e += 2) h.insert(e);
  auto rep = mixing_statistic(g, h, h);
  EXPECT_EQ(rep.observed, 900u);
  EXPECT_EQ(rep.expected, 450);
  EXPECT_EQ(rep.relative_deviation, 1);
}

TEST(Mixing, WholeGroupAndOracle) {
  auto g = build_group("psl2:5");
  auto full = ElementSet::full(60);
  auto rep = mixing_statistic(g, full, full);
  EXPECT_EQ(rep.observed, 3600u);
  EXPECT_EQ(rep.relative_deviation, 0);
  Xorshift64Star rng(1);
  auto a = random_set(g, 30, rng), b = random_set(g, 30, rng);
  EXPECT_EQ(mixing_statistic(g, a, b).observed, oracle::mixing(g, as_bools(a), as_bools(b)));
}

TEST(Recurrence, Z4TwoIsNotWeak) {
  auto g = build_group("cyclic:4");
  RecurrenceOptions o;
  auto res = classify_recurrence(g, ElementSet(4, {2}), o);
  EXPECT_FALSE(res.holds);
  ASSERT_TRUE(res.counterexample);
  const auto& a = *res.counterexample;
  EXPECT_FALSE(translate(g, a, 2, Side::Left).intersects(a));
}

TEST(Recurrence, EmptyAndIdentity) {
  auto g = build_group("sym:3");
  RecurrenceOptions o;
  EXPECT_FALSE(classify_recurrence(g, ElementSet(6), o).holds);
  o.kind = RecurrenceKind::Nice;
  o.delta = make_rational(1, 1000);
  EXPECT_TRUE(classify_recurrence(g, ElementSet(6, {0}), o).holds);
}

TEST(Recurrence, WeakMatchesOracle) {
  for (const char* spec : {"cyclic:6", "sym:3", "cyclic:2*cyclic:4"}) {
    auto g = build_group(spec);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.order()); mask += 3) {
      auto s = ElementSet::from_mask(g.order(), mask);
      RecurrenceOptions o;
      EXPECT_EQ(classify_recurrence(g, s, o).holds, oracle::weak_left_recurrence(g, s.elements())) << spec << " " << mask;
    }
  }
}

TEST(Recurrence, OrderLimit) {
  auto g = build_group("sym:4");
  RecurrenceOptions o;
  EXPECT_THROW(classify_recurrence(g, ElementSet(24, {0}), o), BudgetExceeded);
}
