#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ball.hpp"
#include "core.hpp"
#include "element_set.hpp"
#include "group.hpp"
#include "random.hpp"
#include "setcalc.hpp"

namespace ncschur {

/// Groups up to this order use every element as test-set base and witness
/// candidate; larger groups use the generator ball of radius 1.
inline constexpr std::size_t kFullBaseLimit = 32;

/// A finite group seen through the (sigma, phi)-truncated definitions.
class FiniteContext {
 public:
  explicit FiniteContext(const FiniteGroup& g, std::size_t full_base_limit = kFullBaseLimit)
      : g_(&g), guard_(ElementSet::full(g.order())), closed_(g.order() <= full_base_limit) {
    if (closed_) {
      for (Element e = 0; e < g.order(); ++e) base_.push_back(e);
    } else {
      ElementSet b(g.order(), {g.identity()});
      for (Element x : g.generators()) {
        b.insert(x);
        b.insert(g.inverse(x));
      }
      base_ = b.elements();
    }
  }

  std::size_t size() const { return g_->order(); }
  Element identity() const { return g_->identity(); }
  Element inverse(Element e) const { return g_->inverse(e); }
  Element mul(Element a, Element b) const { return g_->mul(a, b); }
  const ElementSet& guard() const { return guard_; }
  /// Base of the canonical test family for thickness.
  const std::vector<Element>& test_base() const { return base_; }
  /// Candidate pool for syndeticity and pws witnesses F.
  const std::vector<Element>& witness_base() const { return base_; }
  /// Range of the shift y in focusing.
  const ElementSet& y_candidates() const { return guard_; }
  /// The base is the whole group, so thickness and pws witnesses may be
  /// normalized to contain the identity.
  bool closed() const { return closed_; }
  std::string name(Element e) const { return g_->name(e); }
  Element find(const std::string& name) const { return g_->element(name); }
  const FiniteGroup& group() const { return *g_; }

 private:
  const FiniteGroup* g_;
  ElementSet guard_;
  std::vector<Element> base_;
  bool closed_;
};

/// A ball of a free group; claims are asserted only on the guard region.
class BallContext {
 public:
  explicit BallContext(const FreeGroupBall& ball, std::size_t witness_radius = 2)
      : ball_(&ball), all_(ElementSet::full(ball.size())) {
    for (Element e = 0; e < ball.size(); ++e)
      if (ball.length(e) <= witness_radius) witness_.push_back(e);
  }

  std::size_t size() const { return ball_->size(); }
  Element identity() const { return 0; }
  Element inverse(Element e) const { return ball_->inverse(e); }
  Element mul(Element a, Element b) const { return ball_->mul(a, b); }
  const ElementSet& guard() const { return ball_->guard(); }
  const std::vector<Element>& test_base() const { return ball_->unit_ball(); }
  const std::vector<Element>& witness_base() const { return witness_; }
  const ElementSet& y_candidates() const { return all_; }
  bool closed() const { return false; }
  std::string name(Element e) const { return ball_->name(e); }
  Element find(const std::string& name) const { return ball_->find(name); }
  const FreeGroupBall& ball() const { return *ball_; }

 private:
  const FreeGroupBall* ball_;
  ElementSet all_;
  std::vector<Element> witness_;
};

struct PwsParams {
  std::size_t sigma = 4;
  std::size_t phi = 4;
  /// Set-operation budget per predicate evaluation; 0 is unlimited.
  std::uint64_t budget = 50'000'000;
  /// Extra test sets for thickness, next to the canonical family.
  std::vector<ElementSet> extra_tests;
};

namespace detail {

struct Work {
  std::uint64_t used = 0;
  std::uint64_t limit = 0;
  void spend(std::uint64_t n = 1) {
    used += n;
    if (limit && used > limit) throw BudgetExceeded("pws predicate exceeded its budget of " + std::to_string(limit));
  }
};

}  // namespace detail

/// f^-1 T = {x : f x ∈ T}, restricted to defined products.
template <typename Ctx>
ElementSet preimage(const Ctx& ctx, Element f, const ElementSet& t) {
  ElementSet out(ctx.size());
  for (Element x = 0; x < ctx.size(); ++x) {
    const Element p = ctx.mul(f, x);
    if (p != kUndefined && t.contains(p)) out.insert(x);
  }
  return out;
}

/// F^-1 S = ∪_f f^-1 S
template <typename Ctx>
ElementSet preimage_union(const Ctx& ctx, const std::vector<Element>& f, const ElementSet& s) {
  ElementSet out(ctx.size());
  for (Element x : f) out |= preimage(ctx, x, s);
  return out;
}

/// Ft ⊆ T (every product defined)
template <typename Ctx>
bool right_translate_inside(const Ctx& ctx, const std::vector<Element>& f, Element t, const ElementSet& target) {
  for (Element x : f) {
    const Element p = ctx.mul(x, t);
    if (p == kUndefined || !target.contains(p)) return false;
  }
  return true;
}

struct ThickResult {
  bool thick = false;
  /// First failing test set.
  std::vector<Element> failing;
  /// (F, t) with Ft ⊆ T, when recorded.
  std::vector<std::pair<std::vector<Element>, Element>> witnesses;
  std::uint64_t tests = 0;
};

/// Right thickness against every test set F ⊆ base with |F| <= phi (those
/// containing the identity when the base is the whole group, which is
/// equivalent) plus `extra`; the witness t ranges over the guard region.
template <typename Ctx>
ThickResult is_right_thick(const Ctx& ctx, const ElementSet& t, std::size_t phi, const std::vector<ElementSet>& extra = {},
                           bool record = false, detail::Work* work = nullptr) {
  ThickResult res;
  detail::Work local;
  detail::Work& w = work ? *work : local;
  if (phi == 0) throw InvalidInput("phi must be positive");
  for (const auto& fset : extra) {
    const auto f = fset.elements();
    ++res.tests;
    std::optional<Element> found;
    ctx.guard().for_each([&](Element x) {
      if (!found && right_translate_inside(ctx, f, x, t)) found = x;
    });
    w.spend(ctx.guard().count());
    if (!found) {
      res.failing = f;
      return res;
    }
    if (record) res.witnesses.emplace_back(f, *found);
  }
  std::vector<Element> items;
  for (Element b : ctx.test_base())
    if (!ctx.closed() || b != ctx.identity()) items.push_back(b);
  std::vector<ElementSet> pre;
  for (Element b : items) pre.push_back(preimage(ctx, b, t) & ctx.guard());
  w.spend(items.size());

  std::vector<Element> f;
  ElementSet start = ctx.guard();
  std::size_t max_extra = phi;
  if (ctx.closed()) {
    f.push_back(ctx.identity());
    start &= t;
    ++res.tests;
    if (start.empty()) {
      res.failing = f;
      return res;
    }
    if (record) res.witnesses.emplace_back(f, start.first());
    max_extra = phi - 1;
  }
  std::function<bool(std::size_t, const ElementSet&)> rec = [&](std::size_t from, const ElementSet& cur) -> bool {
    for (std::size_t i = from; i < items.size(); ++i) {
      w.spend();
      ++res.tests;
      ElementSet next = cur & pre[i];
      f.push_back(items[i]);
      if (next.empty()) {
        res.failing = f;
        std::sort(res.failing.begin(), res.failing.end());
        return false;
      }
      if (record) {
        auto sorted = f;
        std::sort(sorted.begin(), sorted.end());
        res.witnesses.emplace_back(sorted, next.first());
      }
      if (f.size() - (ctx.closed() ? 1 : 0) < max_extra && !rec(i + 1, next)) return false;
      f.pop_back();
    }
    return true;
  };
  if (max_extra > 0 && !rec(0, start)) return res;
  res.thick = true;
  return res;
}

/// Calls fn on each size-`size` subset of `items` (as index lists) in
/// lexicographic order until fn returns true.
inline bool for_each_combination(std::size_t n, std::size_t size, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  if (size > n) return false;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    if (fn(idx)) return true;
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// F^-1 S covers the guard region.
template <typename Ctx>
bool covers(const Ctx& ctx, const ElementSet& s, const std::vector<Element>& f) {
  return ctx.guard().subset_of(preimage_union(ctx, f, s));
}

/// Smallest F (ties lexicographic) drawn from the base with F^-1 S
/// covering the guard region, if one of size <= sigma exists.
template <typename Ctx>
std::optional<std::vector<Element>> is_left_syndetic(const Ctx& ctx, const ElementSet& s, std::size_t sigma,
                                                     std::uint64_t budget = 0) {
  if (sigma == 0) throw InvalidInput("sigma must be positive");
  detail::Work w{0, budget};
  const auto& items = ctx.witness_base();
  std::vector<ElementSet> pre;
  std::size_t widest = 0;
  for (Element b : items) {
    pre.push_back(preimage(ctx, b, s) & ctx.guard());
    widest = std::max(widest, pre.back().count());
  }
  const std::size_t target = ctx.guard().count();
  std::vector<Element> chosen;
  for (std::size_t size = 1; size <= std::min(sigma, items.size()); ++size) {
    if (widest * size < target) continue;
    std::function<bool(std::size_t, const ElementSet&)> rec = [&](std::size_t from, const ElementSet& covered) -> bool {
      if (chosen.size() == size) return covered.count() == target;
      const std::size_t left = size - chosen.size();
      if (covered.count() + widest * left < target) return false;
      for (std::size_t i = from; i + left <= items.size(); ++i) {
        w.spend();
        chosen.push_back(items[i]);
        if (rec(i + 1, covered | pre[i])) return true;
        chosen.pop_back();
      }
      return false;
    };
    if (rec(0, ElementSet(ctx.size()))) return chosen;
  }
  return std::nullopt;
}

struct PwsWitness {
  /// F with F^-1 A thick.
  std::vector<Element> f;
  ElementSet cover;
};

/// (sigma, phi)-piecewise syndetic: some F from the base with |F| <= sigma
/// makes F^-1 A pass the thickness test. Smallest F first, ties
/// lexicographic; F contains the identity when the base is the whole group.
template <typename Ctx>
std::optional<PwsWitness> is_piecewise_syndetic(const Ctx& ctx, const ElementSet& a, const PwsParams& p) {
  if (p.sigma == 0 || p.phi == 0) throw InvalidInput("sigma and phi must be positive");
  if (a.empty()) return std::nullopt;
  detail::Work w{0, p.budget};
  std::vector<Element> items;
  for (Element b : ctx.witness_base())
    if (!ctx.closed() || b != ctx.identity()) items.push_back(b);
  std::vector<ElementSet> pre;
  for (Element b : items) pre.push_back(preimage(ctx, b, a));
  const ElementSet self = ctx.closed() ? a : ElementSet(ctx.size());
  std::optional<PwsWitness> found;
  for (std::size_t size = 1; size <= p.sigma && !found; ++size) {
    const std::size_t extra = ctx.closed() ? size - 1 : size;
    if (extra > items.size()) break;
    for_each_combination(items.size(), extra, [&](const std::vector<std::size_t>& idx) {
      ElementSet u = self;
      for (auto i : idx) u |= pre[i];
      w.spend();
      if (!is_right_thick(ctx, u, p.phi, p.extra_tests, false, &w).thick) return false;
      PwsWitness wit;
      if (ctx.closed()) wit.f.push_back(ctx.identity());
      for (auto i : idx) wit.f.push_back(items[i]);
      std::sort(wit.f.begin(), wit.f.end());
      wit.cover = std::move(u);
      found = std::move(wit);
      return true;
    });
  }
  return found;
}

// ---------------------------------------------------------------------------
// Pigeonhole for piecewise syndetic sets

struct PwsPigeonholeResult {
  /// {g : g^-1 A ∩ A is pws under `member`}
  ElementSet returned;
  PwsParams member;
  /// F with F^-1 returned covering the guard region.
  std::vector<Element> syndetic_witness;
  PwsWitness a_witness;
};

/// g^-1 A ∩ A = {x ∈ A : g x ∈ A}
template <typename Ctx>
ElementSet self_shift(const Ctx& ctx, const ElementSet& a, Element g) {
  return a & preimage(ctx, g, a);
}

/// Parameters for the members g^-1 A ∩ A when A has a pws witness of size
/// `witness_size`: splitting by the f in F that returns gx to A costs a factor
/// |F| in sigma, as in partition regularity.
inline PwsParams pigeonhole_member_params(const PwsParams& p, std::size_t witness_size) {
  PwsParams m = p;
  m.sigma = p.sigma * witness_size;
  return m;
}

template <typename Ctx>
Outcome<PwsPigeonholeResult> pws_pigeonhole(const Ctx& ctx, const ElementSet& a, const PwsParams& p) {
  auto wit = is_piecewise_syndetic(ctx, a, p);
  if (!wit) return Failure{FailureKind::PwsFailed, "pws_pigeonhole", "A is not (sigma, phi)-piecewise syndetic"};
  PwsPigeonholeResult res;
  res.a_witness = *wit;
  res.member = pigeonhole_member_params(p, wit->f.size());
  res.returned = ElementSet(ctx.size());
  ctx.guard().for_each([&](Element g) {
    if (is_piecewise_syndetic(ctx, self_shift(ctx, a, g), res.member)) res.returned.insert(g);
  });
  const std::size_t bound = p.sigma * wit->f.size();
  auto f = is_left_syndetic(ctx, res.returned, bound, p.budget);
  if (!f)
    return Failure{FailureKind::PwsFailed, "pws_pigeonhole",
                   "the returned set has no syndeticity witness of size <= " + std::to_string(bound)};
  res.syndetic_witness = *f;
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustive tables for small groups

/// Thickness and minimal pws witness size for every subset of a group of
/// order <= 16, with the whole group as test base (F normalized to contain
/// the identity). Matches FiniteContext predicates for such groups.
class SmallGroupPwsTable {
 public:
  static constexpr std::size_t kMaxOrder = 16;

  SmallGroupPwsTable(const FiniteGroup& g, std::size_t phi, std::size_t max_sigma)
      : n_(g.order()), phi_(phi), max_sigma_(max_sigma) {
    if (n_ > kMaxOrder || n_ > kFullBaseLimit) throw InvalidInput("SmallGroupPwsTable needs |G| <= 16");
    if (phi == 0) throw InvalidInput("phi must be positive");
    // lut_[f][byte][value]: image of the byte under y -> f^-1 y
    lut_.assign(n_, {});
    for (Element f = 0; f < n_; ++f)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t v = 0; v < 256; ++v) {
          std::uint32_t out = 0;
          for (std::size_t j = 0; j < 8; ++j) {
            const std::size_t y = 8 * b + j;
            if ((v >> j) & 1U && y < n_) out |= 1U << g.mul(g.inverse(f), static_cast<Element>(y));
          }
          lut_[f][b][v] = static_cast<std::uint16_t>(out);
        }
    const std::uint32_t total = 1U << n_;
    thick_.assign(total, 0);
    for (std::uint32_t m = 0; m < total; ++m) thick_[m] = compute_thick(m);
    min_.assign(total, 0);
    for (std::uint32_t m = 1; m < total; ++m) min_[m] = compute_min(m);
  }

  std::size_t order() const { return n_; }
  std::size_t phi() const { return phi_; }
  std::size_t max_sigma() const { return max_sigma_; }
  /// {x : f x ∈ mask}
  std::uint32_t pre(Element f, std::uint32_t mask) const {
    return lut_[f][0][mask & 0xFFU] | lut_[f][1][(mask >> 8) & 0xFFU];
  }
  bool thick(std::uint32_t mask) const { return thick_[mask] != 0; }
  /// Smallest witness size, or 0 when none of size <= max_sigma exists.
  std::size_t min_witness(std::uint32_t mask) const { return min_[mask]; }
  bool pws(std::uint32_t mask, std::size_t sigma) const {
    if (sigma > max_sigma_) throw InvalidInput("sigma beyond the table");
    return min_[mask] != 0 && min_[mask] <= sigma;
  }

 private:
  std::uint8_t compute_thick(std::uint32_t t) const {
    if (t == 0) return 0;
    std::function<bool(Element, std::size_t, std::uint32_t)> rec = [&](Element from, std::size_t size, std::uint32_t cur) {
      for (Element f = from; f < n_; ++f) {
        const std::uint32_t next = cur & pre(f, t);
        if (next == 0) return false;
        if (size + 1 < phi_ && !rec(f + 1, size + 1, next)) return false;
      }
      return true;
    };
    return phi_ == 1 || rec(1, 1, t) ? 1 : 0;
  }

  std::uint8_t compute_min(std::uint32_t a) const {
    if (thick_[a]) return 1;
    for (std::size_t size = 2; size <= std::min(max_sigma_, n_); ++size) {
      std::function<bool(Element, std::size_t, std::uint32_t)> rec = [&](Element from, std::size_t left, std::uint32_t u) {
        if (left == 0) return thick_[u] != 0;
        for (Element f = from; f + left <= n_; ++f)
          if (rec(f + 1, left - 1, u | pre(f, a))) return true;
        return false;
      };
      if (rec(1, size - 1, a)) return static_cast<std::uint8_t>(size);
    }
    return 0;
  }

  std::size_t n_;
  std::size_t phi_;
  std::size_t max_sigma_;
  std::vector<std::array<std::array<std::uint16_t, 256>, 2>> lut_;
  std::vector<std::uint8_t> thick_;
  std::vector<std::uint8_t> min_;
};

// ---------------------------------------------------------------------------
// Color focusing for {x, xy, yx}

struct PwsFocusParams {
  PwsParams inner;
  PwsParams outer;
  std::size_t samples = 64;
  std::uint64_t seed = 0;
};

struct PwsFocusStep {
  /// S_i = {y : y^-1 A_i ∩ A_i is pws}
  ElementSet s;
  std::optional<std::vector<Element>> s_syndetic;
  /// color of A_i(y) P_i y for each kept y
  std::vector<std::pair<Element, Color>> y_colors;
  Color chosen_color = 0;
  /// y-class of the chosen color
  ElementSet s_chosen;
};

struct PwsFocusResult {
  /// A_0 ⊇ A_1 ⊇ ..., with A_i P_i monochromatic of color colors[i].
  std::vector<ElementSet> a;
  std::vector<Element> y;
  std::vector<Color> colors;
  std::vector<PwsFocusStep> steps;
  std::optional<Failure> failure;
  std::vector<std::string> notes;
  /// Repeat f(i) = colors[j].
  std::size_t i = 0;
  std::size_t j = 0;
  Color color = 0;
  /// y_j ... y_{i-1} S
  ElementSet y_set;
  /// A_i(y) P_j for the first y in S
  ElementSet x_set;
  std::optional<PwsWitness> y_set_witness;
  std::optional<PwsWitness> x_set_witness;
  std::vector<std::pair<Element, Element>> samples;

  bool ok() const { return !failure.has_value(); }
};

namespace detail {

template <typename Ctx>
Element product(const Ctx& ctx, Element a, Element b) {
  if (a == kUndefined || b == kUndefined) return kUndefined;
  return ctx.mul(a, b);
}

template <typename Ctx>
std::optional<PwsWitness> pws_or_budget(const Ctx& ctx, const ElementSet& a, const PwsParams& p, std::vector<std::string>& notes) {
  try {
    return is_piecewise_syndetic(ctx, a, p);
  } catch (const BudgetExceeded& e) {
    if (notes.size() < 16) notes.emplace_back(e.what());
    return std::nullopt;
  }
}

}  // namespace detail

/// Runs the focusing loop: at step i every y whose y^-1 A_i ∩ A_i is pws is
/// colored by the pws class A_i(y) of that set (split by the color of
/// a P_i y); the first repeat of a recorded color gives x in A_i(y) P_j and
/// y_j ... y_{i-1} y with {x, xy, yx} monochromatic.
template <typename Ctx>
PwsFocusResult pws_focusing(const Ctx& ctx, const Coloring& c, const PwsFocusParams& p) {
  if (c.universe() != ctx.size()) throw InvalidInput("coloring does not match the context");
  PwsFocusResult res;
  const std::size_t r = c.r();
  const auto classes = c.classes();
  std::optional<Color> start;
  for (Color col = 0; col <= r && !start; ++col)
    if (detail::pws_or_budget(ctx, classes[col], p.inner, res.notes)) start = col;
  if (!start) {
    res.failure = Failure{FailureKind::StageFailed, "start", "no color class is (sigma, phi)-piecewise syndetic"};
    return res;
  }
  res.a.push_back(classes[*start]);
  res.colors.push_back(*start);
  std::vector<Element> prefix{ctx.identity()};  // P_i
  std::vector<Element> ycands;
  ctx.y_candidates().for_each([&](Element e) { ycands.push_back(e); });

  for (std::size_t i = 0; i <= r; ++i) {
    const ElementSet& ai = res.a.back();
    PwsFocusStep step;
    step.s = ElementSet(ctx.size());
    std::vector<std::pair<Element, ElementSet>> kept;  // y, A_i(y)
    for (Element y : ycands) {
      const Element py = detail::product(ctx, prefix.back(), y);
      if (py == kUndefined) continue;
      ElementSet apy = self_shift(ctx, ai, y);
      if (!detail::pws_or_budget(ctx, apy, p.inner, res.notes)) continue;
      step.s.insert(y);
      std::vector<ElementSet> split(r + 1, ElementSet(ctx.size()));
      apy.for_each([&](Element a) {
        const Element q = detail::product(ctx, a, py);
        if (q != kUndefined) split[c(q)].insert(a);
      });
      for (Color col = 0; col <= r; ++col)
        if (detail::pws_or_budget(ctx, split[col], p.inner, res.notes)) {
          step.y_colors.emplace_back(y, col);
          kept.emplace_back(y, std::move(split[col]));
          break;
        }
    }
    try {
      step.s_syndetic = is_left_syndetic(ctx, step.s, p.outer.sigma, p.outer.budget);
    } catch (const BudgetExceeded& e) {
      res.notes.emplace_back(e.what());
    }
    if (!step.s_syndetic) {
      res.steps.push_back(std::move(step));
      res.failure = Failure{FailureKind::StageFailed, "step " + std::to_string(i),
                            "S_i = {y : y^-1 A_i ∩ A_i pws} has no syndeticity witness of size <= " +
                                std::to_string(p.outer.sigma)};
      return res;
    }
    std::optional<Color> chosen;
    for (Color col = 0; col <= r && !chosen; ++col) {
      ElementSet cls(ctx.size());
      for (auto [y, yc] : step.y_colors)
        if (yc == col) cls.insert(y);
      if (!cls.empty() && detail::pws_or_budget(ctx, cls, p.outer, res.notes)) {
        chosen = col;
        step.s_chosen = std::move(cls);
      }
    }
    if (!chosen) {
      res.steps.push_back(std::move(step));
      res.failure = Failure{FailureKind::StageFailed, "step " + std::to_string(i),
                            "no y-color class of S_i is (sigma, phi)-piecewise syndetic"};
      return res;
    }
    step.chosen_color = *chosen;
    const auto repeat = std::find(res.colors.begin(), res.colors.end(), *chosen);
    if (repeat != res.colors.end()) {
      res.i = i;
      res.j = static_cast<std::size_t>(repeat - res.colors.begin());
      res.color = *chosen;
      // Q = y_j ... y_{i-1}
      Element q = ctx.identity();
      for (std::size_t t = res.j; t < i; ++t) q = detail::product(ctx, q, res.y[t]);
      res.y_set = ElementSet(ctx.size());
      res.x_set = ElementSet(ctx.size());
      std::vector<std::pair<Element, Element>> pairs;
      bool first = true;
      for (const auto& [y, ay] : kept) {
        if (!step.s_chosen.contains(y)) continue;
        const Element big_y = detail::product(ctx, q, y);
        if (big_y == kUndefined) continue;
        res.y_set.insert(big_y);
        ay.for_each([&](Element a) {
          const Element x = detail::product(ctx, a, prefix[res.j]);
          if (x == kUndefined) return;
          if (first) res.x_set.insert(x);
          const Element xy = detail::product(ctx, x, big_y);
          const Element yx = detail::product(ctx, big_y, x);
          if (xy != kUndefined && yx != kUndefined) pairs.emplace_back(x, big_y);
        });
        first = false;
      }
      res.steps.push_back(std::move(step));
      res.y_set_witness = detail::pws_or_budget(ctx, res.y_set, p.outer, res.notes);
      res.x_set_witness = detail::pws_or_budget(ctx, res.x_set, p.inner, res.notes);
      if (!res.y_set_witness) res.notes.emplace_back("the y-set did not pass the outer pws test");
      if (!res.x_set_witness) res.notes.emplace_back("the x-set did not pass the inner pws test");
      if (pairs.size() <= p.samples) {
        res.samples = std::move(pairs);
      } else {
        Xorshift64Star rng(p.seed);
        auto idx = rng.sample_without_replacement(static_cast<std::uint32_t>(pairs.size()), static_cast<std::uint32_t>(p.samples));
        std::sort(idx.begin(), idx.end());
        for (auto k : idx) res.samples.push_back(pairs[k]);
      }
      if (res.samples.empty())
        res.failure = Failure{FailureKind::StageFailed, "emission", "no (x, y) pair with all products defined"};
      return res;
    }
    // Continue with the first non-identity y of the chosen class.
    Element yi = step.s_chosen.first();
    step.s_chosen.for_each([&](Element y) {
      if (yi == ctx.identity() && y != ctx.identity()) yi = y;
    });
    const auto it = std::find_if(kept.begin(), kept.end(), [&](const auto& kv) { return kv.first == yi; });
    res.y.push_back(yi);
    res.a.push_back(it->second);
    res.colors.push_back(*chosen);
    prefix.push_back(detail::product(ctx, prefix.back(), yi));
    res.steps.push_back(std::move(step));
  }
  res.failure = Failure{FailureKind::StageFailed, "pigeonhole", "no color repeated within r+1 steps"};
  return res;
}

/// Every sample has c(x) = c(xy) = c(yx); recorded state is consistent.
template <typename Ctx>
bool verify_pws_focusing(const Ctx& ctx, const Coloring& c, const PwsFocusResult& res, std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (res.a.size() != res.colors.size() || res.y.size() + 1 != res.a.size()) return fail("state lengths disagree");
  Element prefix = ctx.identity();
  for (std::size_t i = 0; i < res.a.size(); ++i) {
    bool mono = true;
    res.a[i].for_each([&](Element a) {
      const Element q = detail::product(ctx, a, prefix);
      mono = mono && q != kUndefined && c(q) == res.colors[i];
    });
    if (!mono) return fail("A_" + std::to_string(i) + " P_" + std::to_string(i) + " is not monochromatic");
    if (i + 1 < res.a.size()) {
      if (!res.a[i + 1].subset_of(res.a[i])) return fail("A is not nested");
      bool inside = true;
      res.a[i + 1].for_each([&](Element a) {
        const Element q = ctx.mul(res.y[i], a);
        inside = inside && q != kUndefined && res.a[i].contains(q);
      });
      if (!inside) return fail("y_i A_{i+1} ⊄ A_i");
      prefix = detail::product(ctx, prefix, res.y[i]);
    }
  }
  for (auto [x, y] : res.samples) {
    const Element xy = detail::product(ctx, x, y);
    const Element yx = detail::product(ctx, y, x);
    if (xy == kUndefined || yx == kUndefined) return fail("sample product undefined");
    if (c(x) != c(xy) || c(x) != c(yx)) return fail("sample (" + ctx.name(x) + ", " + ctx.name(y) + ") is not monochromatic");
    if (res.ok() && c(x) != res.color) return fail("sample has another color");
  }
  return true;
}

}  // namespace ncschur
