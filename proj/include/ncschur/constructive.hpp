#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "element_set.hpp"
#include "group.hpp"
#include "search.hpp"
#include "setcalc.hpp"
#include "tree.hpp"
#include "words.hpp"

namespace ncschur {

namespace detail {

/// |W| / n > (|A| / n)^2 / 2, in integers.
inline bool beats_half_square(std::size_t w, std::size_t a, std::size_t n) {
  return BigInt(2) * BigInt(w) * BigInt(n) > BigInt(a) * BigInt(a);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Density pigeonhole

struct PigeonholeResult {
  std::size_t i = 0;
  std::size_t j = 0;
  /// y_i * ... * y_j
  Element y = 0;
  ElementSet witness;
  Rational witness_density;
};

/// Lexicographically first i <= j such that y = y_i...y_j has
/// density(shifted_intersection(A, y, side)) > density(A)^2 / 2.
/// Always succeeds once ys.size() >= ceil(2 / density(A)).
inline Outcome<PigeonholeResult> density_pigeonhole(const FiniteGroup& g, const ElementSet& a,
                                                    std::span<const Element> ys, Side side) {
  const std::size_t na = a.count();
  if (na == 0) throw InvalidInput("density_pigeonhole needs a set of positive density");
  for (std::size_t i = 0; i < ys.size(); ++i) {
    Element y = g.identity();
    for (std::size_t j = i; j < ys.size(); ++j) {
      y = g.mul(y, ys[j]);
      auto w = shifted_intersection(g, a, y, side);
      if (detail::beats_half_square(w.count(), na, g.order())) {
        const auto d = density(w);
        return PigeonholeResult{i, j, y, std::move(w), d};
      }
    }
  }
  return Failure{FailureKind::NotFound, "density_pigeonhole",
                 "no consecutive product among " + std::to_string(ys.size()) + " elements beats density^2/2"};
}

/// ceil(2 / density(A)): the sequence length at which success is guaranteed.
inline std::size_t pigeonhole_length(const ElementSet& a) {
  if (a.count() == 0) throw InvalidInput("empty set");
  return static_cast<std::size_t>(ceil(Rational(BigInt(2)) / density(a)));
}

// ---------------------------------------------------------------------------
// Iterated pigeonhole

struct IteratedPigeonholeOptions {
  std::size_t k = 1;
  /// Defaults to density(A).
  std::optional<Rational> epsilon;
  std::uint64_t node_budget = 200000;
};

struct IteratedPigeonholeResult {
  /// S_i as products of consecutive blocks of S'_i, in list order.
  std::vector<std::vector<Element>> sets;
  /// (first, last) positions in S'_i of each block.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> blocks;
  /// Length of the prefix of each S'_i actually consumed.
  std::vector<std::size_t> used_prefix;
  ElementSet b;
  Rational b_density;
  /// (epsilon^2 / 2)^(r k)
  Rational bound;
};

/// B ⊆ A and S_i ⊆ FP(S'_i) with |S_i| = k such that s B ⊆ A for every s in
/// every FP(S_i). Each block s_t shrinks B to B ∩ s_t^-1 B (density above
/// the square over 2); choices backtrack until the final density clears
/// (epsilon^2/2)^(rk) or the node budget runs out.
inline Outcome<IteratedPigeonholeResult> iterated_pigeonhole(const FiniteGroup& g, const ElementSet& a,
                                                             const std::vector<std::vector<Element>>& sprime,
                                                             const IteratedPigeonholeOptions& opt) {
  if (a.count() == 0) throw InvalidInput("iterated_pigeonhole needs a set of positive density");
  if (opt.k == 0) throw InvalidInput("k must be positive");
  const std::size_t r = sprime.size();
  const Rational eps = opt.epsilon.value_or(density(a));
  Rational bound = 1;
  const Rational base = eps * eps / 2;
  for (std::size_t i = 0; i < r * opt.k; ++i) bound *= base;

  IteratedPigeonholeResult res;
  res.sets.assign(r, {});
  res.blocks.assign(r, {});
  res.bound = bound;
  std::uint64_t nodes = 0;
  std::string deepest = "S_1 block 1";
  std::size_t deepest_level = 0;

  // stage = i * k + t
  std::function<bool(std::size_t, std::size_t, const ElementSet&)> rec = [&](std::size_t stage, std::size_t pos,
                                                                            const ElementSet& cur) -> bool {
    if (++nodes > opt.node_budget) return false;
    if (stage == r * opt.k) {
      if (density(cur) > bound) {
        res.b = cur;
        return true;
      }
      return false;
    }
    const std::size_t i = stage / opt.k;
    const std::size_t t = stage % opt.k;
    if (t == 0) pos = 0;
    if (stage >= deepest_level) {
      deepest_level = stage;
      deepest = "S_" + std::to_string(i + 1) + " block " + std::to_string(t + 1);
    }
    const auto& seq = sprime[i];
    const std::size_t need_after = opt.k - t - 1;
    for (std::size_t p = pos; p < seq.size(); ++p) {
      Element y = g.identity();
      for (std::size_t q = p; q + need_after < seq.size(); ++q) {
        y = g.mul(y, seq[q]);
        auto next = shifted_intersection(g, cur, y, Side::Left);
        if (!detail::beats_half_square(next.count(), cur.count(), g.order())) continue;
        res.sets[i].push_back(y);
        res.blocks[i].emplace_back(p, q);
        if (rec(stage + 1, q + 1, next)) return true;
        res.sets[i].pop_back();
        res.blocks[i].pop_back();
        if (nodes > opt.node_budget) return false;
      }
    }
    return false;
  };

  if (!rec(0, 0, a)) {
    const bool budget = nodes > opt.node_budget;
    return Failure{FailureKind::NotFound, deepest,
                   budget ? "node budget " + std::to_string(opt.node_budget) + " exhausted"
                          : "no block choice keeps the density above (eps^2/2)^(rk) = " + to_string(bound)};
  }
  for (std::size_t i = 0; i < r; ++i) res.used_prefix.push_back(res.blocks[i].empty() ? 0 : res.blocks[i].back().second + 1);
  res.b_density = density(res.b);
  return res;
}

/// Group values of FP(S) for S in list order, one per non-empty subset mask.
inline std::vector<Element> fp_values(const FiniteGroup& g, std::span<const Element> s) {
  if (s.size() > 20) throw InvalidInput("FP of more than 20 elements");
  std::vector<Element> out;
  const std::uint32_t n = static_cast<std::uint32_t>(s.size());
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    Element acc = g.identity();
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask & (1U << i)) acc = g.mul(acc, s[i]);
    out.push_back(acc);
  }
  return out;
}

/// Independent check of an iterated pigeonhole result.
inline bool verify_iterated_pigeonhole(const FiniteGroup& g, const ElementSet& a,
                                       const std::vector<std::vector<Element>>& sprime,
                                       const IteratedPigeonholeResult& res, std::size_t k) {
  if (!res.b.subset_of(a) || res.sets.size() != sprime.size()) return false;
  for (std::size_t i = 0; i < res.sets.size(); ++i) {
    if (res.sets[i].size() != k || res.blocks[i].size() != k) return false;
    std::size_t next = 0;
    for (std::size_t t = 0; t < k; ++t) {
      auto [p, q] = res.blocks[i][t];
      if (p < next || q < p || q >= sprime[i].size()) return false;
      Element y = g.identity();
      for (std::size_t x = p; x <= q; ++x) y = g.mul(y, sprime[i][x]);
      if (y != res.sets[i][t]) return false;
      next = q + 1;
    }
    for (Element s : fp_values(g, res.sets[i]))
      if (!translate(g, res.b, s, Side::Left).subset_of(a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Monochromatic subtree extraction

using PathColor = std::function<Color(std::span<const FiniteProductTree::VertexId>)>;

struct ExtractParams {
  std::size_t m = 1;
  /// Colors are {0, ..., r}.
  std::size_t r = 1;
  std::size_t k = 1;
};

struct ExtractResult {
  FiniteProductTree tree;
  /// For each vertex of `tree`, the original vertices it concatenates.
  std::vector<std::vector<FiniteProductTree::VertexId>> origins;
  /// Child positions concatenated below every level-1 vertex.
  std::vector<std::uint32_t> chain;
  std::size_t progress_steps = 0;
};

/// ((r+1)(k+1)n + 1) m for n root children.
inline std::size_t extraction_height_bound(std::size_t n, const ExtractParams& p) {
  return ((p.r + 1) * (p.k + 1) * n + 1) * p.m;
}

/// Concatenates a common chain below every level-1 vertex until the first
/// m levels of the concatenated tree carry color 0 on every rooted path.
/// Each non-zero path found extends the chain. The prefix cap on the
/// coloring bounds the non-zero chain prefixes per level-1 vertex and color
/// by k+1, so the loop terminates.
inline Outcome<ExtractResult> extract_monochromatic_subtree(const FiniteGroup& g, const FiniteProductTree& t,
                                                            const PathColor& color, const ExtractParams& p) {
  using VertexId = FiniteProductTree::VertexId;
  if (p.m == 0) throw InvalidInput("m must be positive");
  const auto& level1 = t.children(FiniteProductTree::kRoot);
  const std::size_t n = level1.size();
  if (n == 0) return Failure{FailureKind::HeightInsufficient, "extract", "root has no children"};
  const std::size_t bound = extraction_height_bound(n, p);
  if (t.height() < bound)
    return Failure{FailureKind::HeightInsufficient, "extract",
                   "height " + std::to_string(t.height()) + " below required " + std::to_string(bound)};
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t c = 0; c < t.children(level1[0]).size() || c < t.children(level1[i]).size(); ++c)
      if (t.children(level1[0]).size() != t.children(level1[i]).size() ||
          !t.same_shape(t.children(level1[0])[c], t.children(level1[i])[c]))
        throw InvalidInput("the subtrees below the level-1 vertices must coincide");

  auto path_string = [](std::span<const VertexId> path) {
    std::string s = "[";
    for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "," : "") + std::to_string(path[i]);
    return s + "]";
  };

  {
    const VertexId root[] = {FiniteProductTree::kRoot};
    if (color(root) != 0) return Failure{FailureKind::HypothesisViolated, "root color", "the root path has color " + std::to_string(color(root))};
  }

  std::vector<std::uint32_t> chain;
  std::vector<std::vector<std::size_t>> nonzero(n, std::vector<std::size_t>(p.r + 1, 0));
  std::vector<std::size_t> counted(n, 0);  // chain prefixes of length < counted[v] are tallied
  std::size_t progress = 0;

  auto base_path = [&](std::size_t v, std::size_t len) {
    std::vector<VertexId> path{FiniteProductTree::kRoot, level1[v]};
    auto tail = t.follow(level1[v], std::span<const std::uint32_t>(chain.data(), len));
    path.insert(path.end(), tail.begin(), tail.end());
    return path;
  };

  auto tally = [&]() -> std::optional<Failure> {
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t len = counted[v]; len <= chain.size(); ++len) {
        const auto path = base_path(v, len);
        const Color c = color(path);
        if (c > p.r) throw InvalidInput("path color out of range");
        if (c != 0 && ++nonzero[v][c] > p.k + 1)
          return Failure{FailureKind::HypothesisViolated, "prefix cap",
                         "k+2 nested prefixes of color " + std::to_string(c) + " ending at path " + path_string(path)};
      }
      counted[v] = chain.size() + 1;
    }
    return std::nullopt;
  };

  if (auto f = tally()) return *f;

  while (true) {
    if (1 + chain.size() + (p.m - 1) > t.height())
      return Failure{FailureKind::HeightInsufficient, "extract",
                     "ran out of depth after " + std::to_string(progress) + " progress steps"};
    // Breadth-first over the candidate: depth 0 is the concatenated level-1
    // vertex, then m-1 further levels below the chain end.
    std::optional<std::vector<std::uint32_t>> failing;  // continuation below the chain end
    std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> frontier;
    for (std::size_t v = 0; v < n; ++v) frontier.push_back({v, {}});
    for (std::size_t depth = 0; depth < p.m && !failing; ++depth) {
      std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> next;
      for (const auto& [v, cont] : frontier) {
        auto path = base_path(v, chain.size());
        auto tail = t.follow(path.back(), cont);
        path.insert(path.end(), tail.begin(), tail.end());
        if (color(path) != 0) {
          failing = cont;
          break;
        }
        if (depth + 1 < p.m)
          for (std::uint32_t c = 0; c < t.children(path.back()).size(); ++c) {
            auto ext = cont;
            ext.push_back(c);
            next.push_back({v, std::move(ext)});
          }
      }
      frontier = std::move(next);
    }
    if (!failing) break;
    ++progress;
    if (failing->empty()) chain.push_back(0);
    else chain.insert(chain.end(), failing->begin(), failing->end());
    if (1 + chain.size() > t.height())
      return Failure{FailureKind::HeightInsufficient, "extract",
                     "ran out of depth after " + std::to_string(progress) + " progress steps"};
    if (auto f = tally()) return *f;
  }

  ExtractResult out;
  out.chain = chain;
  out.progress_steps = progress;
  out.tree = FiniteProductTree(t.label(FiniteProductTree::kRoot));
  out.origins.push_back({FiniteProductTree::kRoot});
  std::function<void(VertexId, VertexId, std::size_t)> copy = [&](VertexId src, VertexId dst, std::size_t levels) {
    if (levels == 0) return;
    for (auto c : t.children(src)) {
      auto id = out.tree.add_child(dst, t.label(c));
      out.origins.push_back({c});
      copy(c, id, levels - 1);
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    auto seg = base_path(v, chain.size());
    seg.erase(seg.begin());
    auto id = out.tree.add_child(FiniteProductTree::kRoot, t.product(g, seg));
    out.origins.push_back(seg);
    copy(seg.back(), id, p.m - 1);
  }
  return out;
}

/// Every rooted path of the extracted tree, expanded through origins, is a
/// rooted path of the original tree of color 0; the height is m.
inline bool verify_extracted_subtree(const FiniteGroup& g, const FiniteProductTree& original,
                                     const ExtractResult& res, const PathColor& color, std::size_t m) {
  using VertexId = FiniteProductTree::VertexId;
  if (res.origins.size() != res.tree.size() || res.tree.height() != m) return false;
  if (res.origins[0] != std::vector<VertexId>{FiniteProductTree::kRoot}) return false;
  for (VertexId v = 0; v < res.tree.size(); ++v) {
    std::vector<VertexId> expanded;
    for (auto u : res.tree.path_to(v))
      expanded.insert(expanded.end(), res.origins[u].begin(), res.origins[u].end());
    for (std::size_t i = 0; i < expanded.size(); ++i) {
      if (expanded[i] >= original.size()) return false;
      const auto parent = original.vertex(expanded[i]).parent;
      if (i == 0 ? expanded[i] != FiniteProductTree::kRoot : parent != expanded[i - 1]) return false;
    }
    if (color(expanded) != 0) return false;
    if (res.tree.label(v) != original.product(g, res.origins[v])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Color switching trees

struct SwitchTreeOptions {
  std::size_t m = 1;
  std::size_t n = 1;
  bool rootless = false;
  std::uint64_t node_budget = 1000000;
  std::size_t max_vertices = std::size_t{1} << 20;
};

struct ColorSwitchingTree {
  FiniteProductTree tree;
  /// level_sets[d][i] = S_i for every vertex at depth d; all vertices at a
  /// depth share their sets (the tree is uniform).
  std::vector<std::vector<std::vector<Element>>> level_sets;
  bool rootless = false;
};

struct SwitchTreeResult {
  ColorSwitchingTree tree;
  /// Elements of A that can serve as the root (empty when rootless).
  ElementSet roots;
};

namespace detail {

/// {x : c(x t) = c(x) for all t in paths}
inline ElementSet roots_for(const FiniteGroup& g, const Coloring& c, const ElementSet& paths) {
  ElementSet out(g.order());
  const auto ps = paths.elements();
  for (Element x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Element t : ps)
      if (c(g.mul(x, t)) != c(x)) {
        ok = false;
        break;
      }
    if (ok) out.insert(x);
  }
  return out;
}

inline std::vector<Element> dedupe(const std::vector<Element>& v) {
  std::vector<Element> out;
  for (Element e : v)
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  return out;
}

}  // namespace detail

/// Builds a uniform color switching tree bottom-up. For height h the sets
/// S_i are the lexicographically first n-element lists (ascending index)
/// of non-identity elements whose FP lies in R_i and consists of valid roots
/// of the height h-1 tree. With a root, the top level additionally keeps
/// some element of A a valid root.
inline Outcome<SwitchTreeResult> build_color_switching_tree(const FiniteGroup& g, const Coloring& c,
                                                            const ElementSet& a, const std::vector<ElementSet>& r_sets,
                                                            const SwitchTreeOptions& opt) {
  if (opt.m == 0 || opt.n == 0) throw InvalidInput("m and n must be positive");
  if (opt.n > 16) throw InvalidInput("n must be at most 16");
  if (r_sets.empty()) throw InvalidInput("need at least one class set R_i");
  if (!opt.rootless && a.count() == 0) throw InvalidInput("A must have positive density");
  for (const auto& rs : r_sets)
    if (rs.count() == 0) throw InvalidInput("every R_i must have positive density");

  // levels_bottom[h-1] = sets for the top of U_h
  std::vector<std::vector<std::vector<Element>>> levels_bottom;
  ElementSet paths(g.order());  // P(U_{h-1}) as elements
  std::uint64_t nodes = 0;
  ElementSet top_roots(g.order());

  for (std::size_t h = 1; h <= opt.m; ++h) {
    const bool top_rooted = !opt.rootless && h == opt.m;
    const ElementSet roots_below = detail::roots_for(g, c, paths);
    std::vector<std::vector<Element>> sets;
    ElementSet new_paths(g.order());
    ElementSet keep = top_rooted ? a & roots_below : ElementSet::full(g.order());
    const auto below = paths.elements();
    for (std::size_t i = 0; i < r_sets.size(); ++i) {
      ElementSet pool = r_sets[i] & roots_below;
      pool.erase(g.identity());
      const auto cand = pool.elements();
      std::vector<Element> chosen, fp;
      std::optional<ElementSet> found_keep;
      std::function<bool(std::size_t, const ElementSet&)> rec = [&](std::size_t from, const ElementSet& kept) -> bool {
        if (chosen.size() == opt.n) {
          found_keep = kept;
          return true;
        }
        for (std::size_t ci = from; ci < cand.size(); ++ci) {
          if (++nodes > opt.node_budget) return false;
          const Element s = cand[ci];
          if (std::find(chosen.begin(), chosen.end(), s) != chosen.end()) continue;
          std::vector<Element> added{s};
          for (Element f : fp) added.push_back(g.mul(f, s));
          bool ok = true;
          for (Element e : added)
            if (!pool.contains(e)) {
              ok = false;
              break;
            }
          if (!ok) continue;
          ElementSet next_keep = kept;
          if (top_rooted) {
            ElementSet extra(g.order());
            for (Element e : added) {
              extra.insert(e);
              for (Element t : below) extra.insert(g.mul(e, t));
            }
            next_keep &= detail::roots_for(g, c, extra);
            if (next_keep.empty()) continue;
          }
          const auto fp_size = fp.size();
          chosen.push_back(s);
          fp.insert(fp.end(), added.begin(), added.end());
          if (rec(ci + 1, next_keep)) return true;
          chosen.pop_back();
          fp.resize(fp_size);
          if (nodes > opt.node_budget) return false;
        }
        return false;
      };
      if (!rec(0, keep)) {
        const std::string stage = "height " + std::to_string(h) + " set S_" + std::to_string(i + 1);
        if (nodes > opt.node_budget)
          return Failure{FailureKind::NotFound, stage, "node budget " + std::to_string(opt.node_budget) + " exhausted"};
        return Failure{FailureKind::NotFound, stage,
                       "no " + std::to_string(opt.n) + "-element FP-set inside R_" + std::to_string(i + 1) +
                           " among " + std::to_string(cand.size()) + " admissible elements" +
                           (top_rooted ? " keeping a root in A" : "")};
      }
      if (top_rooted) keep = *found_keep;
      for (Element f : fp) {
        new_paths.insert(f);
        for (Element t : below) new_paths.insert(g.mul(f, t));
      }
      sets.push_back(chosen);
    }
    paths |= new_paths;
    levels_bottom.push_back(std::move(sets));
    if (top_rooted) top_roots = keep;
  }

  SwitchTreeResult res;
  res.tree.rootless = opt.rootless;
  res.roots = opt.rootless ? ElementSet(g.order()) : top_roots;
  std::vector<std::vector<Element>> child_levels;
  for (std::size_t d = 0; d < opt.m; ++d) {
    const auto& sets = levels_bottom[opt.m - 1 - d];
    res.tree.level_sets.push_back(sets);
    std::vector<Element> kids;
    for (const auto& s : sets) {
      auto fp = fp_values(g, s);
      kids.insert(kids.end(), fp.begin(), fp.end());
    }
    child_levels.push_back(detail::dedupe(kids));
  }
  const Element root = opt.rootless ? g.identity() : res.roots.first();
  try {
    res.tree.tree = uniform_tree(root, child_levels, opt.max_vertices);
  } catch (const BudgetExceeded& e) {
    return Failure{FailureKind::NotFound, "materialize", e.what()};
  }
  return res;
}

/// Exhaustive check of both tree invariants: children are exactly the union
/// of FP(S_i) with |S_i| = n and FP(S_i) ⊆ R_i, and the color of every path
/// product v_i...v_j equals the color of v_i (paths from the root excluded
/// when rootless).
inline bool verify_switching_tree(const FiniteGroup& g, const Coloring& c, const ColorSwitchingTree& cst,
                                  const std::vector<ElementSet>& r_sets, std::size_t n, std::string* why = nullptr) {
  using VertexId = FiniteProductTree::VertexId;
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const auto& t = cst.tree;
  const auto m = cst.level_sets.size();
  if (t.height() != m) return fail("height mismatch");
  for (std::size_t d = 0; d < m; ++d) {
    const auto& sets = cst.level_sets[d];
    if (sets.size() != r_sets.size()) return fail("wrong number of sets at depth " + std::to_string(d));
    std::vector<Element> kids;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].size() != n) return fail("|S_i| != n");
      auto uniq = sets[i];
      std::sort(uniq.begin(), uniq.end());
      if (std::adjacent_find(uniq.begin(), uniq.end()) != uniq.end()) return fail("S_i has repeated elements");
      for (Element e : fp_values(g, sets[i])) {
        if (!r_sets[i].contains(e)) return fail("FP(S_i) leaves R_i");
        kids.push_back(e);
      }
    }
    kids = detail::dedupe(kids);
    for (VertexId v = 0; v < t.size(); ++v) {
      if (t.vertex(v).depth != d) continue;
      std::vector<Element> have;
      for (auto ch : t.children(v)) have.push_back(t.label(ch));
      if (have != kids) return fail("children differ from the FP sets at vertex " + std::to_string(v));
    }
  }
  for (VertexId u = cst.rootless ? 1 : 0; u < t.size(); ++u) {
    const Color want = c(t.label(u));
    std::vector<std::pair<VertexId, Element>> stack{{u, t.label(u)}};
    while (!stack.empty()) {
      auto [v, prod] = stack.back();
      stack.pop_back();
      if (c(prod) != want) return fail("path from vertex " + std::to_string(u) + " to " + std::to_string(v) + " switches color");
      for (auto ch : t.children(v)) stack.push_back({ch, g.mul(prod, t.label(ch))});
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Color focusing

struct FocusOptions {
  std::size_t k = 1;
  bool noncommuting = false;
  /// Branching parameter of the switching tree (|S_i| per level).
  std::size_t n = 1;
  /// Build a switching tree for r >= 1; otherwise (or if it fails) enforce the
  /// path-color condition only along the realized path.
  bool use_tree = true;
  /// Cap on emitted instances; 0 emits one per element of X.
  std::size_t limit = 0;
  SwitchTreeOptions tree_options{};
};

/// A_i, y_i, f(i) for i = 0..L with P_i = y_0 ... y_{i-1}:
///   A_{i+1} ⊆ A_i, density(A_{i+1}) > density(A_i)^2 / (2(r+1)),
///   y_i A_{i+1} ⊆ A_i, A_i P_i ⊆ C_{f(i)}, A_0 = C_{f(0)},
///   y_i ∈ C_{f(i)} and c(y_s ... y_j) = f(s) for s <= j.
struct FocusingState {
  std::size_t r = 0;
  std::size_t k = 0;
  Rational epsilon;
  std::vector<ElementSet> a;
  std::vector<Element> y;
  std::vector<Color> f;
};

struct FocusResult {
  FocusingState state;
  /// "pigeonhole" (one color), "tree" or "path".
  std::string mode;
  std::optional<ColorSwitchingTree> tree;
  std::vector<std::string> notes;
  std::optional<Failure> failure;
  /// Pigeonholed steps a_0 < ... < a_k with equal f.
  std::vector<std::size_t> steps;
  Color color = 0;
  /// x_1, ..., x_k
  std::vector<Element> x;
  /// Valid choices of x_0: A_{a_k} P_{a_0}
  ElementSet x0_set;
  std::vector<PatternInstance> instances;

  bool ok() const { return !failure.has_value(); }
};

namespace detail {

struct FocusRun {
  FocusingState state;
  std::optional<Failure> failure;
};

inline FocusRun focus_steps(const FiniteGroup& g, const Coloring& c, const FocusOptions& opt,
                            const ColorSwitchingTree* tree) {
  const std::size_t r = c.r();
  const std::size_t steps = opt.k * (r + 1);
  const auto classes = c.classes();
  FocusRun run;
  auto& st = run.state;
  st.r = r;
  st.k = opt.k;
  Color start = 0;
  for (Color i = 1; i < classes.size(); ++i)
    if (classes[i].count() > classes[start].count()) start = i;
  st.epsilon = density(classes[start]);
  st.a.push_back(classes[start]);
  st.f.push_back(start);
  ElementSet center(g.order());
  for (Element x = 0; x < g.order(); ++x)
    if (centralizer(g, x).count() == g.order()) center.insert(x);

  Element prefix = g.identity();
  for (std::size_t i = 0; i < steps; ++i) {
    const ElementSet& ai = st.a.back();
    const Color fi = st.f.back();
    std::vector<Element> cand;
    if (tree) {
      for (Element e : fp_values(g, tree->level_sets.at(i).at(fi))) cand.push_back(e);
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    } else {
      for (Element e = 0; e < g.order(); ++e) cand.push_back(e);
    }
    bool advanced = false;
    for (Element y : cand) {
      if (y == g.identity() || c(y) != fi) continue;
      if (opt.noncommuting && center.contains(y)) continue;
      if (!tree) {
        // c(y_s ... y_{i-1} y) = f(s) for every earlier s
        bool ok = true;
        Element tail = y;
        for (std::size_t s = i; s-- > 0 && ok;) {
          tail = g.mul(st.y[s], tail);
          ok = c(tail) == st.f[s];
        }
        if (!ok) continue;
      }
      ElementSet shifted = shifted_intersection(g, ai, y, Side::Left);
      if (!beats_half_square(shifted.count(), ai.count(), g.order())) continue;
      const Element next_prefix = g.mul(prefix, y);
      std::vector<ElementSet> split(r + 1, ElementSet(g.order()));
      shifted.for_each([&](Element a) { split[c(g.mul(a, next_prefix))].insert(a); });
      Color best = 0;
      for (Color j = 1; j <= r; ++j)
        if (split[j].count() > split[best].count()) best = j;
      st.y.push_back(y);
      st.a.push_back(std::move(split[best]));
      st.f.push_back(best);
      prefix = next_prefix;
      advanced = true;
      break;
    }
    if (!advanced) {
      run.failure = Failure{FailureKind::StageFailed, "step " + std::to_string(i),
                            "no admissible y among " + std::to_string(cand.size()) + " candidates in color " +
                                std::to_string(fi) + " with density(A_i ∩ y^-1 A_i) > density(A_i)^2/2"};
      return run;
    }
  }
  return run;
}

}  // namespace detail

/// Color focusing on a finite group: k(r+1) steps of the density pigeonhole
/// inside the current color, then a pigeonhole over the record f.
inline FocusResult focusing_construct(const FiniteGroup& g, const Coloring& c, const FocusOptions& opt) {
  if (opt.k == 0 || opt.k > static_cast<std::size_t>(kMaxPatternK)) throw InvalidInput("focusing needs 1 <= k <= 6");
  if (c.universe() != g.order()) throw InvalidInput("coloring does not match group order");
  FocusResult res;
  const std::size_t r = c.r();
  if (opt.noncommuting && g.is_abelian()) {
    res.mode = "none";
    res.state.r = r;
    res.state.k = opt.k;
    res.failure = Failure{FailureKind::StageFailed, "commutation",
                          "the group is abelian, so every pair commutes and no non-commuting instance exists"};
    return res;
  }

  detail::FocusRun run;
  if (r == 0) {
    res.mode = "pigeonhole";
    run = detail::focus_steps(g, c, opt, nullptr);
  } else {
    bool done = false;
    if (opt.use_tree) {
      SwitchTreeOptions to = opt.tree_options;
      to.m = opt.k * (r + 1);
      to.n = opt.n;
      to.rootless = true;
      auto built = build_color_switching_tree(g, c, ElementSet(g.order()), c.classes(), to);
      if (built) {
        res.tree = built->tree;
        run = detail::focus_steps(g, c, opt, &*res.tree);
        if (!run.failure) {
          res.mode = "tree";
          done = true;
        } else {
          res.notes.push_back("tree mode: " + run.failure->describe());
        }
      } else {
        res.notes.push_back("switching tree: " + built.failure().describe());
      }
    }
    if (!done) {
      res.mode = "path";
      run = detail::focus_steps(g, c, opt, nullptr);
    }
  }
  res.state = std::move(run.state);
  if (run.failure) {
    res.failure = run.failure;
    return res;
  }

  // Pigeonhole on f(0..L): the color whose first k+1 occurrences come earliest.
  const auto& st = res.state;
  std::optional<std::vector<std::size_t>> best;
  Color best_color = 0;
  for (Color col = 0; col <= r; ++col) {
    std::vector<std::size_t> occ;
    for (std::size_t i = 0; i < st.f.size() && occ.size() < opt.k + 1; ++i)
      if (st.f[i] == col) occ.push_back(i);
    if (occ.size() == opt.k + 1 && (!best || occ < *best)) {
      best = occ;
      best_color = col;
    }
  }
  if (!best) {
    res.failure = Failure{FailureKind::StageFailed, "pigeonhole", "no color repeats k+1 times"};
    return res;
  }
  res.steps = *best;
  res.color = best_color;
  std::vector<Element> prefix{g.identity()};
  for (Element y : st.y) prefix.push_back(g.mul(prefix.back(), y));
  for (std::size_t t = 1; t <= opt.k; ++t)
    res.x.push_back(g.mul(g.inverse(prefix[res.steps[t - 1]]), prefix[res.steps[t]]));
  res.x0_set = translate(g, st.a[res.steps.back()], prefix[res.steps.front()], Side::Right);

  bool x_commute = false;
  if (opt.noncommuting)
    for (std::size_t i = 0; i < res.x.size(); ++i)
      for (std::size_t j = i + 1; j < res.x.size(); ++j) x_commute = x_commute || g.commute(res.x[i], res.x[j]);
  const auto words = pattern_words(static_cast<int>(opt.k));
  if (!x_commute)
    res.x0_set.for_each([&](Element x0) {
      if (opt.limit && res.instances.size() >= opt.limit) return;
      if (opt.noncommuting)
        for (Element xt : res.x)
          if (g.commute(x0, xt)) return;
      std::vector<Element> assignment{x0};
      assignment.insert(assignment.end(), res.x.begin(), res.x.end());
      res.instances.push_back(make_instance(g, words, std::move(assignment), best_color));
    });
  if (res.instances.empty())
    res.failure = Failure{FailureKind::StageFailed, "extraction",
                          opt.noncommuting ? "every candidate x_0 commutes with some x_t" : "the x_0 set is empty"};
  return res;
}

/// Re-checks the recorded state and the derived instances.
inline bool verify_focusing(const FiniteGroup& g, const Coloring& c, const FocusResult& res,
                            std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const auto& st = res.state;
  if (st.a.empty()) return res.failure ? true : fail("empty state");
  if (st.f.size() != st.a.size() || st.y.size() + 1 != st.a.size()) return fail("state lengths disagree");
  if (st.a[0] != c.color_class(st.f[0])) return fail("A_0 is not a color class");
  Element prefix = g.identity();
  for (std::size_t i = 0; i < st.a.size(); ++i) {
    bool mono = true;
    st.a[i].for_each([&](Element a) { mono = mono && c(g.mul(a, prefix)) == st.f[i]; });
    if (!mono) return fail("A_" + std::to_string(i) + " P_" + std::to_string(i) + " is not monochromatic");
    if (i + 1 < st.a.size()) {
      const auto& next = st.a[i + 1];
      if (!next.subset_of(st.a[i])) return fail("A is not nested at " + std::to_string(i));
      const Rational lhs = density(next);
      const Rational rhs = density(st.a[i]) * density(st.a[i]) / (2 * (st.r + 1));
      if (!(lhs > rhs)) return fail("density condition fails at " + std::to_string(i));
      if (!translate(g, next, st.y[i], Side::Left).subset_of(st.a[i])) return fail("y_i A_{i+1} ⊄ A_i at " + std::to_string(i));
      if (c(st.y[i]) != st.f[i]) return fail("y_i has the wrong color at " + std::to_string(i));
      Element tail = st.y[i];
      for (std::size_t s = i; s-- > 0;) {
        tail = g.mul(st.y[s], tail);
        if (c(tail) != st.f[s]) return fail("path color switches between steps " + std::to_string(s) + " and " + std::to_string(i));
      }
      prefix = g.mul(prefix, st.y[i]);
    }
  }
  if (res.failure) return true;
  if (res.steps.size() != st.k + 1) return fail("wrong number of pigeonholed steps");
  for (std::size_t t = 0; t < res.steps.size(); ++t) {
    if (res.steps[t] >= st.f.size() || st.f[res.steps[t]] != res.color) return fail("pigeonholed step has another color");
    if (t && res.steps[t] <= res.steps[t - 1]) return fail("steps not increasing");
  }
  for (const auto& inst : res.instances) {
    if (inst.color != res.color) return fail("instance color differs");
    if (!res.x0_set.contains(inst.assignment.at(0))) return fail("x_0 outside X");
    if (!std::equal(res.x.begin(), res.x.end(), inst.assignment.begin() + 1)) return fail("x_t mismatch");
    if (!validate_instance(g, c, inst, static_cast<int>(st.k), false)) return fail("instance is not monochromatic");
  }
  return true;
}

}  // namespace ncschur
