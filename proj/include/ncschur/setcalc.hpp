#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "element_set.hpp"
#include "group.hpp"
#include "random.hpp"

namespace ncschur {

/// Exact uniform density |A| / |G|; the invariant mean of a finite group.
inline Rational density(const ElementSet& a) {
  if (a.universe() == 0) return 0;
  return Rational(BigInt(a.count()), BigInt(a.universe()));
}

/// gA (left) or Ag (right).
inline ElementSet translate(const FiniteGroup& g, const ElementSet& a, Element by, Side side) {
  ElementSet out(g.order());
  if (side == Side::Left) a.for_each([&](Element x) { out.insert(g.mul(by, x)); });
  else a.for_each([&](Element x) { out.insert(g.mul(x, by)); });
  return out;
}

/// Right: A ∩ A y^-1 = {x in A : xy in A}. Left: y^-1 A ∩ A = {x in A : yx in A}.
inline ElementSet shifted_intersection(const FiniteGroup& g, const ElementSet& a, Element y, Side side) {
  ElementSet out(g.order());
  if (side == Side::Right) a.for_each([&](Element x) {
      if (a.contains(g.mul(x, y))) out.insert(x);
    });
  else a.for_each([&](Element x) {
      if (a.contains(g.mul(y, x))) out.insert(x);
    });
  return out;
}

inline ElementSet element_set(const FiniteGroup& g, const std::vector<std::string>& names) {
  ElementSet s(g.order());
  for (const auto& n : names) s.insert(g.element(n));
  return s;
}

/// Uniformly random subset with exactly `size` elements (partial Fisher-Yates).
inline ElementSet random_set(const FiniteGroup& g, std::size_t size, Xorshift64Star& rng) {
  ElementSet s(g.order());
  for (auto e : rng.sample_without_replacement(static_cast<std::uint32_t>(g.order()), static_cast<std::uint32_t>(size)))
    s.insert(e);
  return s;
}

/// Map element -> color in {0, ..., num_colors-1}.
class Coloring {
 public:
  Coloring(std::vector<Color> colors, Color num_colors) : colors_(std::move(colors)), num_colors_(num_colors) {
    if (num_colors_ == 0) throw InvalidInput("a coloring needs at least one color");
    for (Color c : colors_)
      if (c >= num_colors_) throw InvalidInput("color index out of range");
  }

  static Coloring constant(const FiniteGroup& g, Color num_colors = 1) {
    return Coloring(std::vector<Color>(g.order(), 0), num_colors);
  }

  /// color[g] = rng.below(num_colors), drawn in element index order.
  static Coloring random(const FiniteGroup& g, Color num_colors, std::uint64_t seed) {
    Xorshift64Star rng(seed);
    std::vector<Color> c(g.order());
    for (auto& x : c) x = static_cast<Color>(rng.below(num_colors));
    return Coloring(std::move(c), num_colors);
  }

  /// Color by element index modulo m.
  static Coloring index_mod(const FiniteGroup& g, Color m) {
    std::vector<Color> c(g.order());
    for (Element e = 0; e < g.order(); ++e) c[e] = static_cast<Color>(e % m);
    return Coloring(std::move(c), m);
  }

  /// One color per listed class, elements outside every class get the last color.
  static Coloring from_classes(const std::vector<ElementSet>& classes) {
    if (classes.empty()) throw InvalidInput("no classes");
    const std::size_t n = classes.front().universe();
    std::vector<Color> c(n, static_cast<Color>(classes.size() - 1));
    for (std::size_t i = classes.size(); i-- > 0;) classes[i].for_each([&](Element e) { c[e] = static_cast<Color>(i); });
    return Coloring(std::move(c), static_cast<Color>(classes.size()));
  }

  Color operator()(Element e) const { return colors_[e]; }
  Color num_colors() const { return num_colors_; }
  /// r, so that colors are {0, ..., r}.
  Color r() const { return num_colors_ - 1; }
  std::size_t universe() const { return colors_.size(); }
  const std::vector<Color>& colors() const { return colors_; }

  ElementSet color_class(Color c) const {
    ElementSet s(colors_.size());
    for (Element e = 0; e < colors_.size(); ++e)
      if (colors_[e] == c) s.insert(e);
    return s;
  }
  std::vector<ElementSet> classes() const {
    std::vector<ElementSet> out;
    for (Color c = 0; c < num_colors_; ++c) out.push_back(color_class(c));
    return out;
  }

  friend bool operator==(const Coloring& a, const Coloring& b) {
    return a.num_colors_ == b.num_colors_ && a.colors_ == b.colors_;
  }

 private:
  std::vector<Color> colors_;
  Color num_colors_;
};

/// Text format: `colors r+1`, then one `name colorIndex` line per element.
inline Coloring read_coloring(std::istream& in, const FiniteGroup& g) {
  std::string word;
  Color k = 0;
  if (!(in >> word) || word != "colors" || !(in >> k) || k == 0)
    throw InvalidInput("coloring file must start with 'colors n'");
  std::vector<Color> c(g.order(), 0);
  std::vector<char> seen(g.order(), 0);
  std::string name;
  long long color = 0;
  std::size_t lines = 0;
  while (in >> name) {
    if (!(in >> color)) throw InvalidInput("coloring file: missing color for '" + name + "'");
    const Element e = g.element(name);
    if (seen[e]) throw InvalidInput("coloring file: element '" + name + "' colored twice");
    if (color < 0 || static_cast<unsigned long long>(color) >= k) throw InvalidInput("coloring file: color out of range");
    seen[e] = 1;
    c[e] = static_cast<Color>(color);
    ++lines;
  }
  if (lines != g.order()) throw InvalidInput("coloring file must color every element exactly once");
  return Coloring(std::move(c), k);
}

inline void write_coloring(std::ostream& out, const FiniteGroup& g, const Coloring& c) {
  out << "colors " << c.num_colors() << "\n";
  for (Element e = 0; e < g.order(); ++e) out << g.name(e) << " " << c(e) << "\n";
}

/// Precomputed left translates g·C (and optionally right translates C·g) of
/// one fixed set, so that the search inner loops reduce to word-parallel
/// intersections.
class TranslateTable {
 public:
  TranslateTable(const FiniteGroup& g, const ElementSet& base, bool right_too)
      : left_(g.order()), right_(right_too ? g.order() : 0) {
    for (Element x = 0; x < g.order(); ++x) {
      left_[x] = translate(g, base, x, Side::Left);
      if (right_too) right_[x] = translate(g, base, x, Side::Right);
    }
  }
  /// x·C
  const ElementSet& left(Element x) const { return left_[x]; }
  /// C·x
  const ElementSet& right(Element x) const { return right_.at(x); }

  /// Rough memory a table for this group would need, in bytes.
  static std::size_t footprint(const FiniteGroup& g, bool right_too) {
    const std::size_t per = (g.order() + 63) / 64 * 8;
    return per * g.order() * (right_too ? 2 : 1);
  }

 private:
  std::vector<ElementSet> left_;
  std::vector<ElementSet> right_;
};

}  // namespace ncschur
