#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "element_set.hpp"
#include "group.hpp"
#include "random.hpp"
#include "setcalc.hpp"
#include "words.hpp"

namespace ncschur {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000ULL;
inline constexpr const char* kBudgetEnvVar = "NCSCHUR_BUDGET";
// Translate tables above this size fall back to per-element checks.
inline constexpr std::size_t kTranslateTableBytes = std::size_t{512} << 20;

/// Budget from the environment override, or the default.
inline std::uint64_t default_budget() {
  if (const char* env = std::getenv(kBudgetEnvVar)) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

/// |G|^e, saturating at UINT64_MAX.
inline std::uint64_t saturating_power(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (base != 0 && r > UINT64_MAX / base) return UINT64_MAX;
    r *= base;
  }
  return r;
}

struct PatternInstance {
  std::vector<Element> assignment;
  Color color = 0;
  std::vector<std::pair<Word, Element>> realized;
};

struct SearchOptions {
  int k = 1;
  /// Require x_i x_j != x_j x_i for every pair of variables.
  bool noncommuting = false;
  /// Stop after this many instances; 0 means exhaustive.
  std::size_t limit = 0;
  std::uint64_t budget = default_budget();
  unsigned threads = 1;
};

namespace detail {

/// The pattern words grouped by their largest variable; each word is split
/// around that variable as u * x_t * v.
struct CompiledPattern {
  struct Split {
    Word word;
    std::vector<Word::Index> prefix;
    std::vector<Word::Index> suffix;
  };
  int k = 0;
  WordSet words;
  std::vector<std::vector<Split>> by_depth;

  explicit CompiledPattern(int k_) : k(k_), words(pattern_words(k_)), by_depth(static_cast<std::size_t>(k_) + 1) {
    for (const auto& w : words) {
      const auto t = w.max_var();
      Split s{w, {}, {}};
      bool after = false;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == t) after = true;
        else (after ? s.suffix : s.prefix).push_back(w[i]);
      }
      by_depth[t].push_back(std::move(s));
    }
  }
};

inline Element eval_vars(const std::vector<Word::Index>& vars, const std::vector<Element>& x, const FiniteGroup& g) {
  Element acc = g.identity();
  for (auto v : vars) acc = g.mul(acc, x[v]);
  return acc;
}

/// DFS engine shared by instance listing and counting. Visits complete
/// assignments in lexicographic order of (x_0, ..., x_k).
class PatternSearch {
 public:
  PatternSearch(const FiniteGroup& g, const Coloring& c, const SearchOptions& opt)
      : g_(g), c_(c), opt_(opt), pattern_(opt.k), classes_(c.classes()) {
    if (opt.k < 0 || opt.k > kMaxPatternK) throw InvalidInput("pattern search supports 0 <= k <= 6");
    if (c.universe() != g.order()) throw InvalidInput("coloring does not match group order");
    const bool fits = TranslateTable::footprint(g, true) * c.num_colors() <= kTranslateTableBytes;
    if (fits && opt.k >= 1)
      for (const auto& cls : classes_) tables_.emplace_back(g, cls, true);
  }

  const detail::CompiledPattern& pattern() const { return pattern_; }

  /// Calls visit(assignment, color) for each instance with x_0 in [begin, end);
  /// stops early when visit returns false. Returns false if stopped.
  template <typename Visit>
  bool run(Element begin, Element end, Visit&& visit) const {
    std::vector<Element> x(static_cast<std::size_t>(opt_.k) + 1, 0);
    for (Element x0 = begin; x0 < end; ++x0) {
      x[0] = x0;
      if (!descend(1, c_(x0), x, visit)) return false;
    }
    return true;
  }

  /// Number of instances with x_0 in [begin, end), counting the last level by popcount.
  std::uint64_t count(Element begin, Element end) const {
    std::uint64_t total = 0;
    std::vector<Element> x(static_cast<std::size_t>(opt_.k) + 1, 0);
    for (Element x0 = begin; x0 < end; ++x0) {
      x[0] = x0;
      total += count_from(1, c_(x0), x);
    }
    return total;
  }

 private:
  ElementSet candidates(int t, Color col, const std::vector<Element>& x) const {
    const ElementSet& cls = classes_[col];
    ElementSet cand = cls;
    std::vector<const detail::CompiledPattern::Split*> two_sided;
    for (const auto& s : pattern_.by_depth[static_cast<std::size_t>(t)]) {
      if (s.prefix.empty() && s.suffix.empty()) continue;
      if (!tables_.empty() && (s.prefix.empty() || s.suffix.empty())) {
        if (s.suffix.empty()) cand &= tables_[col].left(g_.inverse(eval_vars(s.prefix, x, g_)));
        else cand &= tables_[col].right(g_.inverse(eval_vars(s.suffix, x, g_)));
      } else {
        two_sided.push_back(&s);
      }
      if (cand.empty()) return cand;
    }
    if (!two_sided.empty() || opt_.noncommuting) {
      std::vector<std::pair<Element, Element>> ab;
      for (auto* s : two_sided) ab.emplace_back(eval_vars(s->prefix, x, g_), eval_vars(s->suffix, x, g_));
      ElementSet kept(g_.order());
      cand.for_each([&](Element y) {
        for (auto [a, b] : ab)
          if (c_(g_.mul(g_.mul(a, y), b)) != col) return;
        if (opt_.noncommuting)
          for (int s = 0; s < t; ++s)
            if (g_.commute(x[static_cast<std::size_t>(s)], y)) return;
        kept.insert(y);
      });
      return kept;
    }
    return cand;
  }

  template <typename Visit>
  bool descend(int t, Color col, std::vector<Element>& x, Visit& visit) const {
    if (t > opt_.k) return visit(static_cast<const std::vector<Element>&>(x), col);
    const ElementSet cand = candidates(t, col, x);
    bool go = true;
    cand.for_each([&](Element y) {
      if (!go) return;
      x[static_cast<std::size_t>(t)] = y;
      go = descend(t + 1, col, x, visit);
    });
    return go;
  }

  std::uint64_t count_from(int t, Color col, std::vector<Element>& x) const {
    if (t > opt_.k) return 1;
    const ElementSet cand = candidates(t, col, x);
    if (t == opt_.k) return cand.count();
    std::uint64_t total = 0;
    cand.for_each([&](Element y) {
      x[static_cast<std::size_t>(t)] = y;
      total += count_from(t + 1, col, x);
    });
    return total;
  }

  const FiniteGroup& g_;
  const Coloring& c_;
  SearchOptions opt_;
  detail::CompiledPattern pattern_;
  std::vector<ElementSet> classes_;
  std::vector<TranslateTable> tables_;
};

inline void check_budget(const FiniteGroup& g, const SearchOptions& opt) {
  const auto work = saturating_power(g.order(), opt.k + 1);
  if (opt.limit == 0 && work > opt.budget)
    throw BudgetExceeded("search space |G|^(k+1) = " + std::to_string(work) + " exceeds budget " +
                         std::to_string(opt.budget));
}

}  // namespace detail

inline PatternInstance make_instance(const FiniteGroup& g, const WordSet& words, std::vector<Element> assignment,
                                     Color color) {
  PatternInstance inst{std::move(assignment), color, {}};
  for (const auto& w : words) inst.realized.emplace_back(w, eval_word(w, inst.assignment, g));
  return inst;
}

/// All assignments (x_0..x_k) whose pattern words share one color, in
/// lexicographic order; truncated after opt.limit instances when set.
inline std::vector<PatternInstance> find_pattern_instances(const FiniteGroup& g, const Coloring& c,
                                                           const SearchOptions& opt) {
  detail::check_budget(g, opt);
  detail::PatternSearch search(g, c, opt);
  std::vector<PatternInstance> out;
  search.run(0, static_cast<Element>(g.order()), [&](const std::vector<Element>& x, Color col) {
    out.push_back(make_instance(g, search.pattern().words, x, col));
    return opt.limit == 0 || out.size() < opt.limit;
  });
  return out;
}

/// Exhaustive instance count; parallel over x_0 when opt.threads > 1.
inline std::uint64_t count_pattern_instances(const FiniteGroup& g, const Coloring& c, const SearchOptions& opt) {
  SearchOptions o = opt;
  o.limit = 0;
  detail::check_budget(g, o);
  detail::PatternSearch search(g, c, o);
  const auto n = static_cast<Element>(g.order());
  const unsigned threads = std::max(1U, std::min<unsigned>(opt.threads, n));
  if (threads == 1) return search.count(0, n);
  std::vector<std::uint64_t> partial(threads, 0);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const Element b = static_cast<Element>(std::uint64_t{n} * t / threads);
    const Element e = static_cast<Element>(std::uint64_t{n} * (t + 1) / threads);
    pool.emplace_back([&, t, b, e] { partial[t] = search.count(b, e); });
  }
  for (auto& th : pool) th.join();
  std::uint64_t total = 0;
  for (auto p : partial) total += p;
  return total;
}

/// Independent check of one instance: recomputes every pattern word.
inline bool validate_instance(const FiniteGroup& g, const Coloring& c, const PatternInstance& inst, int k,
                              bool noncommuting) {
  if (inst.assignment.size() != static_cast<std::size_t>(k) + 1) return false;
  for (Element e : inst.assignment)
    if (e >= g.order()) return false;
  for (const auto& w : pattern_words(k))
    if (c(eval_word(w, inst.assignment, g)) != inst.color) return false;
  for (const auto& [w, e] : inst.realized)
    if (eval_word(w, inst.assignment, g) != e) return false;
  if (noncommuting)
    for (std::size_t i = 0; i < inst.assignment.size(); ++i)
      for (std::size_t j = i + 1; j < inst.assignment.size(); ++j)
        if (g.commute(inst.assignment[i], inst.assignment[j])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// "Many" statistic

struct ManyLevel {
  int variable = 0;
  std::uint64_t valid_prefixes = 0;
  /// valid_prefixes / |G|^level
  Rational density;
};

struct ManyReport {
  int k = 0;
  /// Outer to inner: x_1, ..., x_k, then x_0.
  std::vector<ManyLevel> levels;
  std::uint64_t instances = 0;
  /// For k = 1: density of {y : {x : {x,y,xy,yx} monochromatic} non-empty}.
  Rational outer_density;
};

/// Nesting order used by the statistic, outermost first.
inline std::vector<int> many_nesting_order(int k) {
  std::vector<int> ord;
  for (int v = 1; v <= k; ++v) ord.push_back(v);
  ord.push_back(0);
  return ord;
}

/// Finite rendering of "many": a prefix of the nesting order is valid when
/// some completion is an instance, so positivity becomes non-emptiness; the
/// exact densities are reported for stricter thresholds.
inline ManyReport many_statistic(const FiniteGroup& g, const Coloring& c, const SearchOptions& opt) {
  SearchOptions o = opt;
  o.limit = 0;
  detail::check_budget(g, o);
  detail::PatternSearch search(g, c, o);
  const auto ord = many_nesting_order(opt.k);
  std::vector<std::unordered_set<std::uint64_t>> seen(ord.size());
  ManyReport rep;
  rep.k = opt.k;
  search.run(0, static_cast<Element>(g.order()), [&](const std::vector<Element>& x, Color) {
    ++rep.instances;
    std::uint64_t key = 0;
    for (std::size_t l = 0; l < ord.size(); ++l) {
      key = key * g.order() + x[static_cast<std::size_t>(ord[l])];
      seen[l].insert(key);
    }
    return true;
  });
  BigInt space = 1;
  for (std::size_t l = 0; l < ord.size(); ++l) {
    space *= g.order();
    rep.levels.push_back({ord[l], seen[l].size(), Rational(BigInt(seen[l].size()), space)});
  }
  rep.outer_density = rep.levels.front().density;
  return rep;
}

// ---------------------------------------------------------------------------
// Finite product counts (large reversed-IP diagnostics)

struct FpCountOptions {
  int k = 1;
  Direction direction = Direction::Backward;
  /// Exhaustive up to this k, sampling above it.
  int exhaustive_max_k = 3;
  bool force_sampling = false;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

struct FpCountReport {
  int k = 0;
  Direction direction = Direction::Backward;
  bool sampled = false;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  /// Exact count, or the sampled estimate hits/samples * |G|^(k+1).
  Rational count;
  /// density(A)^(2^(k+1)-1) * |G|^(k+1)
  Rational expected;
  /// count / expected; absent when expected is 0.
  std::optional<Rational> ratio;
};

/// Tuples (x_0..x_k) with every word of FP in the given direction landing in A.
inline FpCountReport fp_tuple_count(const FiniteGroup& g, const ElementSet& a, const FpCountOptions& opt) {
  if (opt.k < 0 || opt.k > 12) throw InvalidInput("fp_tuple_count supports 0 <= k <= 12");
  FpCountReport rep;
  rep.k = opt.k;
  rep.direction = opt.direction;
  const int n = opt.k + 1;
  BigInt space = 1;
  for (int i = 0; i < n; ++i) space *= g.order();
  const Rational d = density(a);
  Rational e = space;
  for (int i = 0; i < (1 << n) - 1; ++i) e *= d;
  rep.expected = e;

  // Words ending (forward) or starting (backward) with x_t are u*x_t / x_t*v
  // with u, v ranging over FP of earlier variables in the same direction.
  const bool forward = opt.direction == Direction::Forward;
  auto word_value = [&](std::uint32_t mask, const std::vector<Element>& x) {
    Element acc = g.identity();
    if (forward) {
      for (int i = 0; i < n; ++i)
        if (mask & (1U << i)) acc = g.mul(acc, x[static_cast<std::size_t>(i)]);
    } else {
      for (int i = n - 1; i >= 0; --i)
        if (mask & (1U << i)) acc = g.mul(acc, x[static_cast<std::size_t>(i)]);
    }
    return acc;
  };

  if (opt.k <= opt.exhaustive_max_k && !opt.force_sampling) {
    TranslateTable table(g, a, true);
    std::vector<Element> x(static_cast<std::size_t>(n), 0);
    std::function<std::uint64_t(int)> rec = [&](int t) -> std::uint64_t {
      ElementSet cand = a;
      for (std::uint32_t mask = 1; mask < (1U << t) && !cand.empty(); ++mask) {
        const Element w = word_value(mask, x);
        cand &= forward ? table.left(g.inverse(w)) : table.right(g.inverse(w));
      }
      if (t == n - 1) return cand.count();
      std::uint64_t total = 0;
      cand.for_each([&](Element y) {
        x[static_cast<std::size_t>(t)] = y;
        total += rec(t + 1);
      });
      return total;
    };
    const std::uint64_t total = rec(0);
    rep.hits = total;
    rep.count = Rational(BigInt(total));
  } else {
    Xorshift64Star rng(opt.seed);
    std::vector<Element> x(static_cast<std::size_t>(n), 0);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < opt.samples; ++s) {
      for (auto& v : x) v = static_cast<Element>(rng.below(g.order()));
      bool ok = true;
      for (std::uint32_t mask = 1; mask < (1U << n) && ok; ++mask) ok = a.contains(word_value(mask, x));
      hits += ok ? 1 : 0;
    }
    rep.sampled = true;
    rep.samples = opt.samples;
    rep.hits = hits;
    rep.count = opt.samples ? Rational(BigInt(hits), BigInt(opt.samples)) * space : Rational(0);
  }
  if (rep.expected != 0) rep.ratio = rep.count / rep.expected;
  return rep;
}

// ---------------------------------------------------------------------------
// Mixing

struct MixingReport {
  std::uint64_t observed = 0;
  /// |A| |B| |A| / |G|
  Rational expected;
  /// |observed - expected| / expected (0 when both vanish)
  Rational relative_deviation;
};

/// Counts (a, b) in A x B with ab in A.
inline MixingReport mixing_statistic(const FiniteGroup& g, const ElementSet& a, const ElementSet& b) {
  MixingReport rep;
  const auto bs = b.elements();
  a.for_each([&](Element x) {
    for (Element y : bs)
      if (a.contains(g.mul(x, y))) ++rep.observed;
  });
  const BigInt na(a.count()), nb(b.count());
  rep.expected = Rational(na * nb * na, BigInt(g.order()));
  if (rep.expected == 0) {
    rep.relative_deviation = rep.observed == 0 ? Rational(0) : Rational(1);
  } else {
    Rational diff = Rational(BigInt(rep.observed)) - rep.expected;
    if (diff < 0) diff = -diff;
    rep.relative_deviation = diff / rep.expected;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Recurrence

enum class RecurrenceKind { Weak, Plain, Nice };

inline const char* to_string(RecurrenceKind k) {
  switch (k) {
    case RecurrenceKind::Weak: return "weak";
    case RecurrenceKind::Plain: return "plain";
    case RecurrenceKind::Nice: return "nice";
  }
  return "";
}

struct RecurrenceOptions {
  Side side = Side::Left;
  RecurrenceKind kind = RecurrenceKind::Weak;
  Rational delta = make_rational(1, 2);
  /// With `large`, at least ceil(theta |G|) elements of S must qualify.
  bool large = false;
  std::optional<Rational> theta;
  std::size_t max_order = 16;
};

struct RecurrenceResult {
  bool holds = false;
  /// First non-empty A (in mask order) for which the condition fails.
  std::optional<ElementSet> counterexample;
  std::uint64_t sets_checked = 0;
};

/// Exhaustive over every non-empty A ⊆ G. Left uses s^-1 A ∩ A, right uses
/// A s^-1 ∩ A. "nice" requires μ(.) > μ(A) - δ together with μ(.) > 0.
inline RecurrenceResult classify_recurrence(const FiniteGroup& g, const ElementSet& s, const RecurrenceOptions& opt) {
  const std::size_t n = g.order();
  if (n > opt.max_order || n > 24)
    throw BudgetExceeded("exhaustive recurrence classification needs |G| <= " +
                         std::to_string(std::min<std::size_t>(opt.max_order, 24)));
  if (opt.kind == RecurrenceKind::Nice && opt.delta <= 0) throw InvalidInput("delta must be positive");
  const Rational theta = opt.theta.value_or(Rational(BigInt(1), BigInt(n)));
  const std::uint64_t need = opt.large ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ceil(theta * n))) : 1;
  // perm[i][x]: image of x under the shift by the i-th element of S.
  const auto members = s.elements();
  std::vector<std::vector<Element>> perm;
  for (Element e : members) {
    std::vector<Element> p(n);
    for (Element x = 0; x < n; ++x) p[x] = opt.side == Side::Left ? g.mul(e, x) : g.mul(x, e);
    perm.push_back(std::move(p));
  }
  RecurrenceResult res;
  res.holds = true;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    ++res.sets_checked;
    const int size_a = std::popcount(mask);
    std::uint64_t good = 0;
    for (const auto& p : perm) {
      int inter = 0;
      for (std::uint64_t m = mask; m; m &= m - 1) {
        const auto x = static_cast<Element>(std::countr_zero(m));
        if ((mask >> p[x]) & 1U) ++inter;
      }
      bool ok = inter > 0;
      if (opt.kind == RecurrenceKind::Nice)
        ok = ok && Rational(BigInt(inter), BigInt(n)) > Rational(BigInt(size_a), BigInt(n)) - opt.delta;
      if (ok && ++good >= need) break;
    }
    if (good < need) {
      res.holds = false;
      res.counterexample = ElementSet::from_mask(n, mask);
      return res;
    }
  }
  return res;
}

}  // namespace ncschur
