#pragma once

// Brute-force reference implementations. They use only the Cayley table and
// direct definitions, never the library's search or set machinery.

#include <cstdint>
#include <functional>
#include <vector>

#include "ncschur/group.hpp"
#include "ncschur/setcalc.hpp"

namespace oracle {

using ncschur::Color;
using ncschur::Element;
using ncschur::FiniteGroup;

inline bool commute(const FiniteGroup& g, Element a, Element b) { return g.mul(a, b) == g.mul(b, a); }

/// k = 0: every x is an instance.
inline std::uint64_t pattern_count_k0(const FiniteGroup& g) { return g.order(); }

/// k = 1: pairs (x, y) with {x, y, xy, yx} one color.
inline std::uint64_t pattern_count_k1(const FiniteGroup& g, const std::vector<Color>& c, bool noncommuting) {
  std::uint64_t total = 0;
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y) {
      if (noncommuting && commute(g, x, y)) continue;
      const Color col = c[x];
      if (c[y] == col && c[g.mul(x, y)] == col && c[g.mul(y, x)] == col) ++total;
    }
  return total;
}

/// k = 2 written out: {x, y, z, xy, yx, yz, zx, xyz, yzx, zxy}.
inline std::uint64_t pattern_count_k2(const FiniteGroup& g, const std::vector<Color>& c) {
  std::uint64_t total = 0;
  const auto m = [&](Element a, Element b) { return g.mul(a, b); };
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      for (Element z = 0; z < g.order(); ++z) {
        const Color col = c[x];
        const Element v[] = {y, z, m(x, y), m(y, x), m(y, z), m(z, x), m(m(x, y), z), m(m(y, z), x), m(m(z, x), y)};
        bool ok = true;
        for (Element e : v) ok = ok && c[e] == col;
        if (ok) ++total;
      }
  return total;
}

/// |{(a, b) ∈ A × B : ab ∈ A}|
inline std::uint64_t mixing(const FiniteGroup& g, const std::vector<bool>& a, const std::vector<bool>& b) {
  std::uint64_t total = 0;
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      if (a[x] && b[y] && a[g.mul(x, y)]) ++total;
  return total;
}

/// Pairs (x0, x1) with x0, x1 and the two-letter word in A; backward uses x1 x0.
inline std::uint64_t fp_pairs(const FiniteGroup& g, const std::vector<bool>& a, bool backward) {
  std::uint64_t total = 0;
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      if (a[x] && a[y] && a[backward ? g.mul(y, x) : g.mul(x, y)]) ++total;
  return total;
}

/// Weak (left) recurrence straight from the definition: every non-empty A
/// meets s^-1 A for some s ∈ S, i.e. some a ∈ A has s a ∈ A.
inline bool weak_left_recurrence(const FiniteGroup& g, const std::vector<Element>& s) {
  const std::size_t n = g.order();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    bool hit = false;
    for (Element x : s)
      for (Element a = 0; a < n && !hit; ++a)
        if ((mask >> a) & 1U && (mask >> g.mul(x, a)) & 1U) hit = true;
    if (!hit) return false;
  }
  return true;
}

/// Right thick against every F ⊆ G with 1 <= |F| <= phi (no normalization).
inline bool thick(const FiniteGroup& g, std::uint64_t t, std::size_t phi) {
  const std::size_t n = g.order();
  for (std::uint64_t f = 1; f < (std::uint64_t{1} << n); ++f) {
    if (static_cast<std::size_t>(__builtin_popcountll(f)) > phi) continue;
    bool found = false;
    for (Element x = 0; x < n && !found; ++x) {
      bool inside = true;
      for (Element e = 0; e < n && inside; ++e)
        if ((f >> e) & 1U) inside = (t >> g.mul(e, x)) & 1U;
      found = inside;
    }
    if (!found) return false;
  }
  return true;
}

/// F^-1 S as a mask.
inline std::uint64_t preimage_union(const FiniteGroup& g, std::uint64_t f, std::uint64_t s) {
  std::uint64_t out = 0;
  for (Element x = 0; x < g.order(); ++x)
    for (Element e = 0; e < g.order(); ++e)
      if ((f >> e) & 1U && (s >> g.mul(e, x)) & 1U) out |= std::uint64_t{1} << x;
  return out;
}

/// Smallest |F| (over all subsets, no normalization) with F^-1 A thick, or 0.
inline std::size_t min_pws_witness(const FiniteGroup& g, std::uint64_t a, std::size_t sigma, std::size_t phi) {
  const std::size_t n = g.order();
  std::size_t best = 0;
  for (std::uint64_t f = 1; f < (std::uint64_t{1} << n); ++f) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(f));
    if (size > sigma || (best && size >= best)) continue;
    if (thick(g, preimage_union(g, f, a), phi)) best = size;
  }
  return best;
}

/// Smallest |F| with F^-1 S = G, or 0.
inline std::size_t min_syndetic_witness(const FiniteGroup& g, std::uint64_t s, std::size_t sigma) {
  const std::size_t n = g.order();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::size_t best = 0;
  for (std::uint64_t f = 1; f < (std::uint64_t{1} << n); ++f) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(f));
    if (size > sigma || (best && size >= best)) continue;
    if (preimage_union(g, f, s) == full) best = size;
  }
  return best;
}

}  // namespace oracle
