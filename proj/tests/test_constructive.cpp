#include <gtest/gtest.h>

#include "ncschur/constructive.hpp"

using namespace ncschur;

namespace {

ElementSet range_set(std::size_t n, Element lo, Element hi) {
  ElementSet s(n);
  for (Element e = lo; e < hi; ++e) s.insert(e);
  return s;
}

}  // namespace

TEST(DensityPigeonhole, WholeGroup) {
  auto g = build_group("sym:3");
  const std::vector<Element> ys{3, 4};
  auto res = density_pigeonhole(g, ElementSet::full(6), ys, Side::Right);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->i, 0u);
  EXPECT_EQ(res->j, 0u);
  EXPECT_EQ(res->witness_density, 1);
}

TEST(DensityPigeonhole, SubgroupOfZ4) {
  auto g = build_group("cyclic:4");
  ElementSet a(4, {0, 2});
  const std::vector<Element> ys{2, 2};
  auto res = density_pigeonhole(g, a, ys, Side::Right);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->y, 2u);
  EXPECT_EQ(res->witness, a);
  EXPECT_EQ(res->witness_density, make_rational(1, 2));
  EXPECT_EQ(pigeonhole_length(a), 4u);
}

TEST(DensityPigeonhole, ShortSequenceCanFail) {
  auto g = build_group("cyclic:8");
  ElementSet a(8, {0});
  const std::vector<Element> ys{1};
  auto res = density_pigeonhole(g, a, ys, Side::Left);
  ASSERT_FALSE(res);
  EXPECT_EQ(res.failure().kind, FailureKind::NotFound);
}

TEST(DensityPigeonhole, GuaranteedLengthSucceeds) {
  Xorshift64Star rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = build_group(trial % 2 ? "sym:4" : "dihedral:9");
    const auto size = 1 + rng.below(g.order());
    auto a = random_set(g, size, rng);
    std::vector<Element> ys(pigeonhole_length(a));
    for (auto& y : ys) y = static_cast<Element>(rng.below(g.order()));
    auto res = density_pigeonhole(g, a, ys, trial % 3 ? Side::Right : Side::Left);
    ASSERT_TRUE(res);
    EXPECT_GT(res->witness_density, density(a) * density(a) / 2);
  }
}

TEST(IteratedPigeonhole, Z8Example) {
  auto g = build_group("cyclic:8");
  auto a = range_set(8, 0, 6);
  const std::vector<std::vector<Element>> sp{{1, 1, 1, 1}};
  IteratedPigeonholeOptions o;
  auto res = iterated_pigeonhole(g, a, sp, o);
  ASSERT_TRUE(res) << res.failure().describe();
  EXPECT_GT(res->b_density, make_rational(9, 32));
  EXPECT_EQ(res->bound, make_rational(9, 32));
  EXPECT_TRUE(verify_iterated_pigeonhole(g, a, sp, *res, 1));
}

TEST(IteratedPigeonhole, WholeGroupAndSeveralLists) {
  auto g = build_group("sym:4");
  const std::vector<std::vector<Element>> sp{{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}};
  IteratedPigeonholeOptions o;
  o.k = 2;
  auto res = iterated_pigeonhole(g, ElementSet::full(24), sp, o);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->b, ElementSet::full(24));
  EXPECT_TRUE(verify_iterated_pigeonhole(g, ElementSet::full(24), sp, *res, 2));

  auto bad = *res;
  bad.sets[0][0] = g.mul(bad.sets[0][0], 1);
  EXPECT_FALSE(verify_iterated_pigeonhole(g, ElementSet::full(24), sp, bad, 2));
}

TEST(FpValues, ListOrder) {
  auto g = build_group("sym:3");
  const std::vector<Element> s{1, 2};
  auto v = fp_values(g, s);
  EXPECT_EQ(v, (std::vector<Element>{1, 2, g.mul(1, 2)}));
}

namespace {

/// Root with `width` children, then unary chains labelled 1 down to `height`.
FiniteProductTree broom(std::size_t width, std::size_t height) {
  std::vector<std::vector<Element>> levels(height, std::vector<Element>{1});
  levels[0].clear();
  for (std::size_t i = 0; i < width; ++i) levels[0].push_back(static_cast<Element>(i + 1));
  return uniform_tree(0, levels, std::size_t{1} << 20);
}

}  // namespace

TEST(Extract, AllZeroKeepsFirstLevels) {
  auto g = build_group("cyclic:5");
  PathColor zero = [](std::span<const FiniteProductTree::VertexId>) { return Color{0}; };
  ExtractParams p;
  p.m = 2;
  auto t = broom(2, extraction_height_bound(2, p));
  auto res = extract_monochromatic_subtree(g, t, zero, p);
  ASSERT_TRUE(res) << res.failure().describe();
  EXPECT_EQ(res->tree.height(), 2u);
  EXPECT_EQ(res->tree.size(), 5u);
  for (FiniteProductTree::VertexId v = 0; v < res->tree.size(); ++v) EXPECT_EQ(res->tree.label(v), t.label(v == 0 ? 0 : res->origins[v].back()));
  EXPECT_TRUE(verify_extracted_subtree(g, t, *res, zero, 2));
}

TEST(Extract, HeightBelowBound) {
  auto g = build_group("cyclic:5");
  auto t = broom(2, 3);
  PathColor zero = [](std::span<const FiniteProductTree::VertexId>) { return Color{0}; };
  auto res = extract_monochromatic_subtree(g, t, zero, ExtractParams{});
  ASSERT_FALSE(res);
  EXPECT_EQ(res.failure().kind, FailureKind::HeightInsufficient);
}

TEST(Extract, ViolatedHypothesisIsReported) {
  auto g = build_group("cyclic:5");
  ExtractParams p;
  auto t = broom(1, extraction_height_bound(1, p));
  // Every non-root path is colored 1, so the same vertex sees far more than
  // k+1 non-zero chain prefixes.
  PathColor bad = [](std::span<const FiniteProductTree::VertexId> path) { return Color(path.size() > 1 ? 1 : 0); };
  auto res = extract_monochromatic_subtree(g, t, bad, p);
  ASSERT_FALSE(res);
  EXPECT_EQ(res.failure().kind, FailureKind::HypothesisViolated);
}

TEST(SwitchTree, Z8EvenResidues) {
  auto g = build_group("cyclic:8");
  auto c = Coloring::index_mod(g, 2);
  auto a = range_set(8, 0, 6);
  const std::vector<ElementSet> r{c.color_class(0)};
  SwitchTreeOptions o;
  auto res = build_color_switching_tree(g, c, a, r, o);
  ASSERT_TRUE(res) << res.failure().describe();
  ASSERT_EQ(res->tree.level_sets.size(), 1u);
  EXPECT_EQ(res->tree.level_sets[0][0], std::vector<Element>{2});
  EXPECT_FALSE(res->roots.empty());
  EXPECT_TRUE(res->roots.subset_of(a));
  std::string why;
  EXPECT_TRUE(verify_switching_tree(g, c, res->tree, r, 1, &why)) << why;
}

TEST(SwitchTree, TwoClassesInPsl25) {
  auto g = build_group("psl2:5");
  auto c = Coloring::random(g, 2, 1);
  const auto r = c.classes();
  SwitchTreeOptions o;
  auto res = build_color_switching_tree(g, c, ElementSet::full(60), r, o);
  ASSERT_TRUE(res) << res.failure().describe();
  std::string why;
  EXPECT_TRUE(verify_switching_tree(g, c, res->tree, r, 1, &why)) << why;
}

TEST(SwitchTree, CorruptedTreeFailsVerification) {
  auto g = build_group("cyclic:8");
  auto c = Coloring::index_mod(g, 2);
  const std::vector<ElementSet> r{c.color_class(0)};
  auto res = build_color_switching_tree(g, c, range_set(8, 0, 6), r, SwitchTreeOptions{});
  ASSERT_TRUE(res);
  auto cst = res->tree;
  cst.level_sets[0][0] = {1};
  EXPECT_FALSE(verify_switching_tree(g, c, cst, r, 1));
}

TEST(Focusing, OneColorNonAbelian) {
  auto g = build_group("sym:3");
  auto c = Coloring::constant(g, 1);
  FocusOptions o;
  auto res = focusing_construct(g, c, o);
  ASSERT_TRUE(res.ok()) << res.failure->describe();
  EXPECT_EQ(res.mode, "pigeonhole");
  ASSERT_FALSE(res.instances.empty());
  SearchOptions so;
  auto all = find_pattern_instances(g, c, so);
  for (const auto& inst : res.instances) {
    EXPECT_TRUE(validate_instance(g, c, inst, 1, false));
    EXPECT_TRUE(std::any_of(all.begin(), all.end(), [&](const auto& x) { return x.assignment == inst.assignment; }));
  }
  std::string why;
  EXPECT_TRUE(verify_focusing(g, c, res, &why)) << why;
}

TEST(Focusing, AbelianNoncommutingIsDegenerate) {
  auto g = build_group("cyclic:12");
  FocusOptions o;
  o.noncommuting = true;
  auto res = focusing_construct(g, Coloring::constant(g, 1), o);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.failure->stage, "commutation");
  EXPECT_TRUE(res.instances.empty());
}

TEST(Focusing, TwoColorsPsl27Revalidate) {
  auto g = build_group("psl2:7");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto c = Coloring::random(g, 2, seed);
    auto res = focusing_construct(g, c, FocusOptions{});
    std::string why;
    EXPECT_TRUE(verify_focusing(g, c, res, &why)) << why;
    if (res.ok()) {
      for (const auto& inst : res.instances) EXPECT_TRUE(validate_instance(g, c, inst, 1, false));
      if (res.tree) {
        EXPECT_TRUE(verify_switching_tree(g, c, *res.tree, c.classes(), 1));
      }
    } else {
      EXPECT_FALSE(res.failure->reason.empty());
    }
  }
}

TEST(Focusing, TamperedStateFailsVerification) {
  auto g = build_group("sym:4");
  auto c = Coloring::constant(g, 1);
  auto res = focusing_construct(g, c, FocusOptions{});
  ASSERT_TRUE(res.ok());
  auto bad = res;
  bad.instances.at(0).color = 1;
  EXPECT_FALSE(verify_focusing(g, c, bad));
  bad = res;
  bad.steps = {1, 0};
  EXPECT_FALSE(verify_focusing(g, c, bad));
}
