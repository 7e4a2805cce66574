#include <gtest/gtest.h>

#include "ncschur/pws.hpp"
#include "oracles.hpp"

using namespace ncschur;

namespace {

ElementSet residues(std::size_t n, std::initializer_list<Element> members) { return ElementSet(n, members); }

ElementSet evens(std::size_t n) {
  ElementSet s(n);
  for (Element e = 0; e < n; e += 2) s.insert(e);
  return s;
}

PwsParams params(std::size_t sigma, std::size_t phi) {
  PwsParams p;
  p.sigma = sigma;
  p.phi = phi;
  return p;
}

}  // namespace

TEST(Thick, FullAndEmpty) {
  auto g = build_group("cyclic:12");
  FiniteContext ctx(g);
  EXPECT_TRUE(is_right_thick(ctx, ElementSet::full(12), 3).thick);
  EXPECT_FALSE(is_right_thick(ctx, ElementSet(12), 3).thick);
}

TEST(Thick, Z12ExampleWitness) {
  auto g = build_group("cyclic:12");
  FiniteContext ctx(g);
  auto t = residues(12, {0, 1, 2, 3, 6, 7, 8, 9});
  const std::vector<Element> f{0, 1};
  EXPECT_TRUE(right_translate_inside(ctx, f, 0, t));
  PwsParams p;
  p.extra_tests = {ElementSet(12, {0, 1})};
  auto res = is_right_thick(ctx, t, 2, p.extra_tests, true);
  EXPECT_TRUE(res.thick);
  bool saw = false;
  for (const auto& [fs, w] : res.witnesses)
    if (fs == f) {
      saw = true;
      EXPECT_EQ(w, 0u);
    }
  EXPECT_TRUE(saw);
  // {0, 4} + t never fits: 4 + {0,1,2,3} lands on 4..7.
  EXPECT_FALSE(is_right_thick(ctx, t, 3).thick);
}

TEST(Thick, MatchesOracle) {
  for (const char* spec : {"cyclic:6", "sym:3", "cyclic:2*cyclic:4", "dihedral:4"}) {
    auto g = build_group(spec);
    FiniteContext ctx(g);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.order()); mask += 5)
      for (std::size_t phi : {1, 2, 3})
        ASSERT_EQ(is_right_thick(ctx, ElementSet::from_mask(g.order(), mask), phi).thick,
                  oracle::thick(g, mask, phi))
            << spec << " mask " << mask << " phi " << phi;
  }
}

TEST(Syndetic, Examples) {
  auto g = build_group("cyclic:6");
  FiniteContext ctx(g);
  auto f = is_left_syndetic(ctx, ElementSet::full(6), 1);
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, std::vector<Element>{0});
  auto s = residues(6, {0, 3});
  EXPECT_FALSE(is_left_syndetic(ctx, s, 2));
  f = is_left_syndetic(ctx, s, 3);
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, (std::vector<Element>{0, 1, 2}));
  EXPECT_TRUE(covers(ctx, s, *f));
  EXPECT_FALSE(is_left_syndetic(ctx, ElementSet(6), 6));
}

TEST(Syndetic, MatchesOracle) {
  auto g = build_group("dihedral:4");
  FiniteContext ctx(g);
  for (std::uint64_t mask = 1; mask < 256; mask += 3) {
    auto w = is_left_syndetic(ctx, ElementSet::from_mask(8, mask), 3);
    EXPECT_EQ(w ? w->size() : 0, oracle::min_syndetic_witness(g, mask, 3)) << mask;
  }
}

TEST(Pws, Examples) {
  auto g = build_group("cyclic:12");
  FiniteContext ctx(g);
  auto full = is_piecewise_syndetic(ctx, ElementSet::full(12), params(3, 3));
  ASSERT_TRUE(full);
  EXPECT_EQ(full->f, std::vector<Element>{0});
  EXPECT_FALSE(is_piecewise_syndetic(ctx, ElementSet(12), params(3, 3)));
  auto ev = is_piecewise_syndetic(ctx, evens(12), params(3, 3));
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->f, (std::vector<Element>{0, 1}));
  EXPECT_EQ(ev->cover, ElementSet::full(12));
  EXPECT_THROW(is_piecewise_syndetic(ctx, evens(12), params(0, 3)), InvalidInput);
}

TEST(Pws, TableMatchesGenericPredicateAndOracle) {
  for (const char* spec : {"cyclic:6", "sym:3", "cyclic:8", "dihedral:4"}) {
    auto g = build_group(spec);
    FiniteContext ctx(g);
    SmallGroupPwsTable table(g, 3, 3);
    for (std::uint32_t mask = 1; mask < (1U << g.order()); ++mask) {
      auto a = ElementSet::from_mask(g.order(), mask);
      ASSERT_EQ(table.thick(mask), is_right_thick(ctx, a, 3).thick) << spec << " " << mask;
      auto w = is_piecewise_syndetic(ctx, a, params(3, 3));
      ASSERT_EQ(table.min_witness(mask), w ? w->f.size() : 0) << spec << " " << mask;
      if (mask % 7 == 0) {
        ASSERT_EQ(table.min_witness(mask), oracle::min_pws_witness(g, mask, 3, 3)) << spec << " " << mask;
      }
    }
  }
}

TEST(Pws, SymThreeThickCount) {
  SmallGroupPwsTable table(build_group("sym:3"), 3, 3);
  int thick = 0;
  for (std::uint32_t m = 0; m < 64; ++m) thick += table.thick(m);
  EXPECT_EQ(thick, 13);
}

TEST(PwsPigeonhole, FullAndEvens) {
  auto g = build_group("cyclic:12");
  FiniteContext ctx(g);
  auto full = pws_pigeonhole(ctx, ElementSet::full(12), params(3, 3));
  ASSERT_TRUE(full);
  EXPECT_EQ(full->returned, ElementSet::full(12));
  EXPECT_EQ(full->syndetic_witness, std::vector<Element>{0});

  auto res = pws_pigeonhole(ctx, evens(12), params(3, 3));
  ASSERT_TRUE(res) << res.failure().describe();
  EXPECT_TRUE(evens(12).subset_of(res->returned));
  EXPECT_TRUE(res->returned.contains(0));
  EXPECT_TRUE(covers(ctx, res->returned, res->syndetic_witness));
  EXPECT_LE(res->syndetic_witness.size(), 3 * res->a_witness.f.size());

  auto none = pws_pigeonhole(ctx, ElementSet(12), params(3, 3));
  ASSERT_FALSE(none);
  EXPECT_EQ(none.failure().kind, FailureKind::PwsFailed);
}

TEST(PwsFocusing, ConstantColoring) {
  auto g = build_group("sym:4");
  FiniteContext ctx(g);
  PwsFocusParams p;
  p.inner = p.outer = params(3, 3);
  auto c = Coloring::constant(g, 1);
  auto res = pws_focusing(ctx, c, p);
  ASSERT_TRUE(res.ok()) << res.failure->describe();
  EXPECT_EQ(res.colors.front(), 0u);
  EXPECT_FALSE(res.samples.empty());
  std::string why;
  EXPECT_TRUE(verify_pws_focusing(ctx, c, res, &why)) << why;
}

TEST(PwsFocusing, Z24Blocks) {
  auto g = build_group("cyclic:24");
  FiniteContext ctx(g);
  std::vector<Color> colors(24);
  for (Element x = 0; x < 24; ++x) colors[x] = x / 12;
  Coloring c(colors, 2);
  PwsFocusParams p;
  p.inner = p.outer = params(3, 3);
  auto res = pws_focusing(ctx, c, p);
  std::string why;
  EXPECT_TRUE(verify_pws_focusing(ctx, c, res, &why)) << why;
  ASSERT_TRUE(res.ok()) << res.failure->describe();
  for (auto [x, y] : res.samples) {
    EXPECT_EQ(c(x), c(g.mul(x, y)));
    EXPECT_EQ(c(x), c(g.mul(y, x)));
  }
}

TEST(PwsFocusing, FreeGroupBallFirstLetter) {
  FreeGroupBall ball(2, 5);
  BallContext ctx(ball);
  const auto c = ball.first_letter_coloring();
  PwsFocusParams p;
  p.inner = p.outer = params(3, 3);
  p.seed = 7;
  auto res = pws_focusing(ctx, c, p);
  ASSERT_TRUE(res.ok()) << res.failure->describe();
  std::string why;
  EXPECT_TRUE(verify_pws_focusing(ctx, c, res, &why)) << why;
  for (auto [x, y] : res.samples) {
    const auto xy = ball.mul(x, y), yx = ball.mul(y, x);
    if (xy == kUndefined || yx == kUndefined) continue;
    EXPECT_EQ(c(x), c(xy));
    EXPECT_EQ(c(x), c(yx));
  }
}

TEST(PwsFocusing, TamperedSampleFails) {
  auto g = build_group("cyclic:24");
  FiniteContext ctx(g);
  std::vector<Color> colors(24);
  for (Element x = 0; x < 24; ++x) colors[x] = x / 12;
  Coloring c(colors, 2);
  PwsFocusParams p;
  p.inner = p.outer = params(3, 3);
  auto res = pws_focusing(ctx, c, p);
  ASSERT_TRUE(res.ok());
  ASSERT_FALSE(res.samples.empty());
  res.samples[0].second = 12;
  res.samples[0].first = 0;
  EXPECT_FALSE(verify_pws_focusing(ctx, c, res));
}

TEST(Ball, Structure) {
  FreeGroupBall b(2, 3);
  EXPECT_EQ(b.size(), 1u + 4 + 12 + 36);
  EXPECT_EQ(b.unit_ball().size(), 5u);
  const auto a = b.find("a"), ai = b.find("A");
  EXPECT_EQ(b.mul(a, ai), b.identity());
  EXPECT_EQ(b.inverse(a), ai);
  EXPECT_EQ(b.length(b.mul(a, a)), 2u);
}

TEST(PwsPigeonhole, MembersUseScaledSigma) {
  // Every g^-1 A ∩ A with g != 0 is a singleton, which is not (3,3)-pws in
  // Z_7; at sigma scaled by |F| they are.
  auto g = build_group("cyclic:7");
  FiniteContext ctx(g);
  auto a = residues(7, {0, 2, 3});
  auto res = pws_pigeonhole(ctx, a, params(3, 3));
  ASSERT_TRUE(res) << res.failure().describe();
  EXPECT_EQ(res->member.sigma, 3 * res->a_witness.f.size());
  EXPECT_EQ(res->member.phi, 3u);
  EXPECT_EQ(res->returned, ElementSet::full(7));
  EXPECT_TRUE(covers(ctx, res->returned, res->syndetic_witness));
}
