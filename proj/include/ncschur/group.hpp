#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "element_set.hpp"
#include "random.hpp"

namespace ncschur {

inline constexpr std::uint64_t kDefaultOrderCap = 10080;
// The Cayley table is stored with 16-bit entries.
inline constexpr std::uint64_t kHardOrderLimit = 65536;
inline constexpr std::uint64_t kFullAssociativityLimit = 64;
inline constexpr std::uint64_t kSampledAssociativityTriples = 100000;
inline constexpr std::uint64_t kAssociativitySeed = 0x0A550C1A71F17EULL;

/// A finite group given by its Cayley table. Elements are dense indices with
/// identity 0; table(g, h) is the product g*h. Immutable after construction.
class FiniteGroup {
 public:
  /// Validates and wraps a table. Throws InvalidInput when the table is not a
  /// group operation with identity 0 or the names are not unique.
  static FiniteGroup from_table(std::vector<std::string> names, std::vector<std::vector<Element>> rows,
                                std::string spec = "table") {
    const std::size_t n = names.size();
    if (n == 0) throw InvalidInput("group must have at least one element");
    if (n > kHardOrderLimit) throw OrderCapExceeded("group order exceeds hard limit 65536");
    if (rows.size() != n) throw InvalidInput("table must have one row per element");
    FiniteGroup g;
    g.order_ = n;
    g.spec_ = std::move(spec);
    g.table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      if (rows[a].size() != n) throw InvalidInput("table row " + std::to_string(a) + " has wrong length");
      for (std::size_t b = 0; b < n; ++b) {
        if (rows[a][b] >= n) throw InvalidInput("table entry out of range");
        g.table_[a * n + b] = static_cast<std::uint16_t>(rows[a][b]);
      }
    }
    g.names_ = std::move(names);
    g.finish();
    return g;
  }

  std::size_t order() const { return order_; }
  Element identity() const { return 0; }
  const std::string& spec() const { return spec_; }

  Element mul(Element a, Element b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  /// a^-1 * b
  Element left_div(Element a, Element b) const { return mul(inverse_[a], b); }
  /// a * b^-1
  Element right_div(Element a, Element b) const { return mul(a, inverse_[b]); }

  bool commute(Element a, Element b) const { return mul(a, b) == mul(b, a); }
  bool is_abelian() const {
    for (Element a = 0; a < order_; ++a)
      for (Element b = a + 1; b < order_; ++b)
        if (!commute(a, b)) return false;
    return true;
  }

  const std::string& name(Element e) const { return names_.at(e); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Element> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  Element element(std::string_view name) const {
    auto e = find(name);
    if (!e) throw InvalidInput("unknown element name '" + std::string(name) + "'");
    return *e;
  }

  /// A generating set (canonical for the built-in families, greedy otherwise).
  const std::vector<Element>& generators() const { return generators_; }

  /// Row g of the table as element indices.
  std::vector<Element> row(Element g) const {
    std::vector<Element> r(order_);
    for (Element h = 0; h < order_; ++h) r[h] = mul(g, h);
    return r;
  }

  void set_generators(std::vector<Element> gens) { generators_ = std::move(gens); }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.names_ == b.names_ && a.table_ == b.table_;
  }

 private:
  FiniteGroup() = default;

  void finish() {
    const std::size_t n = order_;
    for (std::size_t i = 0; i < n; ++i) {
      if (!by_name_.emplace(names_[i], static_cast<Element>(i)).second)
        throw InvalidInput("duplicate element name '" + names_[i] + "'");
      if (names_[i].empty() || names_[i].find_first_of(" \t\r\n") != std::string::npos)
        throw InvalidInput("element names must be non-empty and whitespace-free");
    }
    // Latin square: every row and every column is a permutation.
    std::vector<std::uint32_t> seen(n, 0);
    std::uint32_t stamp = 0;
    for (std::size_t a = 0; a < n; ++a) {
      ++stamp;
      for (std::size_t b = 0; b < n; ++b) {
        auto& s = seen[table_[a * n + b]];
        if (s == stamp) throw InvalidInput("table row " + std::to_string(a) + " is not a bijection");
        s = stamp;
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      ++stamp;
      for (std::size_t a = 0; a < n; ++a) {
        auto& s = seen[table_[a * n + b]];
        if (s == stamp) throw InvalidInput("table column " + std::to_string(b) + " is not a bijection");
        s = stamp;
      }
    }
    for (Element g = 0; g < n; ++g)
      if (mul(0, g) != g || mul(g, 0) != g) throw InvalidInput("element 0 is not the identity");
    inverse_.assign(n, 0);
    for (Element g = 0; g < n; ++g) {
      for (Element h = 0; h < n; ++h)
        if (mul(g, h) == 0) {
          inverse_[g] = h;
          break;
        }
      if (mul(inverse_[g], g) != 0) throw InvalidInput("left and right inverses differ");
    }
    auto assoc = [&](Element a, Element b, Element c) {
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        throw InvalidInput("associativity fails for (" + std::to_string(a) + "," + std::to_string(b) + "," +
                           std::to_string(c) + ")");
    };
    if (n <= kFullAssociativityLimit) {
      for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b)
          for (Element c = 0; c < n; ++c) assoc(a, b, c);
    } else {
      Xorshift64Star rng(kAssociativitySeed);
      for (std::uint64_t t = 0; t < kSampledAssociativityTriples; ++t) {
        const auto a = static_cast<Element>(rng.below(n));
        const auto b = static_cast<Element>(rng.below(n));
        const auto c = static_cast<Element>(rng.below(n));
        assoc(a, b, c);
      }
    }
    generators_ = greedy_generators();
  }

  std::vector<Element> greedy_generators() const {
    std::vector<Element> gens;
    std::vector<char> in(order_, 0);
    in[0] = 1;
    for (Element g = 1; g < order_; ++g) {
      if (in[g]) continue;
      gens.push_back(g);
      // Subgroup generated so far: closure of {identity} under right multiplication.
      std::fill(in.begin(), in.end(), 0);
      in[0] = 1;
      std::vector<Element> frontier{0};
      while (!frontier.empty()) {
        const Element x = frontier.back();
        frontier.pop_back();
        for (Element s : gens) {
          const Element p = mul(x, s);
          if (!in[p]) {
            in[p] = 1;
            frontier.push_back(p);
          }
        }
      }
    }
    return gens;
  }

  std::size_t order_ = 0;
  std::string spec_;
  std::vector<std::uint16_t> table_;
  std::vector<Element> inverse_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Element> by_name_;
  std::vector<Element> generators_;
};

// ---------------------------------------------------------------------------
// Group specifications

enum class GroupFamily { Cyclic, Dihedral, Symmetric, Psl2, Product, TableFile };

/// Family tag plus parameters. Textual forms: `cyclic:n`, `dihedral:n`
/// (order 2n), `sym:n` (or `symmetric:n`), `psl2:p`, `file:path`, and direct
/// products joined by `*`, e.g. `cyclic:2*sym:3`.
struct GroupSpec {
  GroupFamily family = GroupFamily::Cyclic;
  std::uint64_t parameter = 1;
  std::string path;
  std::vector<GroupSpec> factors;

  static GroupSpec cyclic(std::uint64_t n) { return {GroupFamily::Cyclic, n, {}, {}}; }
  static GroupSpec dihedral(std::uint64_t n) { return {GroupFamily::Dihedral, n, {}, {}}; }
  static GroupSpec symmetric(std::uint64_t n) { return {GroupFamily::Symmetric, n, {}, {}}; }
  static GroupSpec psl2(std::uint64_t p) { return {GroupFamily::Psl2, p, {}, {}}; }
  static GroupSpec file(std::string p) { return {GroupFamily::TableFile, 0, std::move(p), {}}; }
  static GroupSpec product(std::vector<GroupSpec> fs) { return {GroupFamily::Product, 0, {}, std::move(fs)}; }
};

inline std::string to_string(const GroupSpec& s) {
  switch (s.family) {
    case GroupFamily::Cyclic: return "cyclic:" + std::to_string(s.parameter);
    case GroupFamily::Dihedral: return "dihedral:" + std::to_string(s.parameter);
    case GroupFamily::Symmetric: return "sym:" + std::to_string(s.parameter);
    case GroupFamily::Psl2: return "psl2:" + std::to_string(s.parameter);
    case GroupFamily::TableFile: return "file:" + s.path;
    case GroupFamily::Product: {
      std::string out;
      for (std::size_t i = 0; i < s.factors.size(); ++i) out += (i ? "*" : "") + to_string(s.factors[i]);
      return out;
    }
  }
  return {};
}

namespace detail {

inline std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InvalidInput("bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

inline GroupSpec parse_group_spec(std::string_view text) {
  if (text.rfind("file:", 0) == 0) return GroupSpec::file(std::string(text.substr(5)));
  if (text.find('*') != std::string_view::npos) {
    std::vector<GroupSpec> factors;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find('*', start);
      factors.push_back(parse_group_spec(text.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return GroupSpec::product(std::move(factors));
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("group spec needs family:parameter, got '" + std::string(text) + "'");
  const auto family = text.substr(0, colon);
  const auto n = detail::parse_uint(text.substr(colon + 1), "group parameter");
  if (family == "cyclic" || family == "Z") return GroupSpec::cyclic(n);
  if (family == "dihedral" || family == "D") return GroupSpec::dihedral(n);
  if (family == "sym" || family == "symmetric" || family == "S") return GroupSpec::symmetric(n);
  if (family == "psl2") return GroupSpec::psl2(n);
  throw InvalidInput("unknown group family '" + std::string(family) + "'");
}

namespace detail {

inline std::vector<std::string> read_table_header(std::istream& in, std::size_t& n) {
  std::string word;
  if (!(in >> word) || word != "order") throw InvalidInput("table file must start with 'order n'");
  if (!(in >> n) || n == 0) throw InvalidInput("table file: bad order");
  std::vector<std::string> names(n);
  for (auto& nm : names)
    if (!(in >> nm)) throw InvalidInput("table file: missing element names");
  return names;
}

}  // namespace detail

/// Reads the Cayley table text format: `order n`, then n names, then n rows
/// of n integers (row g lists g*h).
inline FiniteGroup read_table(std::istream& in, std::string spec = "table", std::uint64_t cap = kDefaultOrderCap) {
  std::size_t n = 0;
  auto names = detail::read_table_header(in, n);
  if (n > cap) throw OrderCapExceeded("table order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  std::vector<std::vector<Element>> rows(n, std::vector<Element>(n));
  for (auto& r : rows)
    for (auto& x : r) {
      long long v = 0;
      if (!(in >> v)) throw InvalidInput("table file: truncated table");
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw InvalidInput("table file: entry out of range");
      x = static_cast<Element>(v);
    }
  std::string extra;
  if (in >> extra) throw InvalidInput("table file: trailing data");
  return FiniteGroup::from_table(std::move(names), std::move(rows), std::move(spec));
}

inline void write_table(std::ostream& out, const FiniteGroup& g) {
  out << "order " << g.order() << "\n";
  for (Element e = 0; e < g.order(); ++e) out << (e ? " " : "") << g.name(e);
  out << "\n";
  for (Element a = 0; a < g.order(); ++a) {
    for (Element b = 0; b < g.order(); ++b) out << (b ? " " : "") << g.mul(a, b);
    out << "\n";
  }
}

/// Order of the group a spec describes (reads only the header of table files).
inline std::uint64_t spec_order(const GroupSpec& s) {
  switch (s.family) {
    case GroupFamily::Cyclic: return s.parameter;
    case GroupFamily::Dihedral: return 2 * s.parameter;
    case GroupFamily::Symmetric: {
      std::uint64_t f = 1;
      for (std::uint64_t i = 2; i <= s.parameter; ++i) {
        f *= i;
        if (f > kHardOrderLimit) return f;
      }
      return f;
    }
    case GroupFamily::Psl2: {
      const std::uint64_t p = s.parameter;
      if (p > 100) return kHardOrderLimit + 1;
      return p == 2 ? 6 : p * (p * p - 1) / 2;
    }
    case GroupFamily::Product: {
      std::uint64_t o = 1;
      for (const auto& f : s.factors) {
        o *= spec_order(f);
        if (o > kHardOrderLimit) return o;
      }
      return o;
    }
    case GroupFamily::TableFile: {
      std::ifstream in(s.path);
      if (!in) throw InvalidInput("cannot open table file '" + s.path + "'");
      std::size_t n = 0;
      std::string word;
      if (!(in >> word) || word != "order" || !(in >> n)) throw InvalidInput("table file must start with 'order n'");
      return n;
    }
  }
  return 0;
}

namespace detail {

inline FiniteGroup build_cyclic(std::uint64_t n) {
  std::vector<std::string> names(n);
  std::vector<std::vector<Element>> rows(n, std::vector<Element>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    names[i] = std::to_string(i);
    for (std::uint64_t j = 0; j < n; ++j) rows[i][j] = static_cast<Element>((i + j) % n);
  }
  auto g = FiniteGroup::from_table(std::move(names), std::move(rows), "cyclic:" + std::to_string(n));
  if (n > 1) g.set_generators({1});
  return g;
}

// Index i < n is the rotation r^i; index n + i is the reflection s r^i.
inline FiniteGroup build_dihedral(std::uint64_t n) {
  const std::uint64_t order = 2 * n;
  std::vector<std::string> names(order);
  for (std::uint64_t i = 0; i < n; ++i) {
    names[i] = "r" + std::to_string(i);
    names[n + i] = "sr" + std::to_string(i);
  }
  std::vector<std::vector<Element>> rows(order, std::vector<Element>(order));
  for (std::uint64_t x = 0; x < order; ++x)
    for (std::uint64_t y = 0; y < order; ++y) {
      const std::uint64_t a = x / n, i = x % n, b = y / n, j = y % n;
      const std::uint64_t rot = ((b ? n - i : i) + j) % n;
      rows[x][y] = static_cast<Element>(((a ^ b) * n) + rot);
    }
  auto g = FiniteGroup::from_table(std::move(names), std::move(rows), "dihedral:" + std::to_string(n));
  if (n > 1) g.set_generators({1, static_cast<Element>(n)});
  else g.set_generators({static_cast<Element>(n)});
  return g;
}

inline std::string cycle_name(const std::vector<int>& perm) {
  std::string out;
  std::vector<char> done(perm.size(), 0);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (done[i] || perm[i] == static_cast<int>(i)) continue;
    out += "(";
    std::size_t j = i;
    bool first = true;
    while (!done[j]) {
      done[j] = 1;
      out += (first ? "" : ",") + std::to_string(j + 1);
      first = false;
      j = static_cast<std::size_t>(perm[j]);
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

// Permutations in lexicographic one-line order; (g*h)(i) = g(h(i)).
inline FiniteGroup build_symmetric(std::uint64_t n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, Element> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index.emplace(perms[i], static_cast<Element>(i));
  const std::size_t order = perms.size();
  std::vector<std::string> names(order);
  std::vector<std::vector<Element>> rows(order, std::vector<Element>(order));
  std::vector<int> prod(n);
  for (std::size_t a = 0; a < order; ++a) {
    names[a] = cycle_name(perms[a]);
    for (std::size_t b = 0; b < order; ++b) {
      for (std::size_t i = 0; i < n; ++i) prod[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
      rows[a][b] = index.at(prod);
    }
  }
  auto g = FiniteGroup::from_table(std::move(names), std::move(rows), "sym:" + std::to_string(n));
  if (n >= 2) {
    std::vector<int> t(n), c(n);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[0], t[1]);
    for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<int>((i + 1) % n);
    std::vector<Element> gens{index.at(t)};
    if (n > 2) gens.push_back(index.at(c));
    g.set_generators(std::move(gens));
  }
  return g;
}

// SL(2,p) matrices (a,b,c,d) modulo +-I, each class represented by the
// lexicographically smaller of M and -M. Identity first, then the remaining
// representatives in lexicographic order.
inline FiniteGroup build_psl2(std::uint64_t p) {
  if (!is_prime(p)) throw InvalidInput("psl2 parameter must be prime, got " + std::to_string(p));
  using Mat = std::array<std::uint64_t, 4>;
  auto canon = [p](Mat m) {
    Mat neg{(p - m[0]) % p, (p - m[1]) % p, (p - m[2]) % p, (p - m[3]) % p};
    return std::min(m, neg);
  };
  const Mat ident = canon({1, 0, 0, 1});
  std::vector<Mat> reps{ident};
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t c = 0; c < p; ++c)
        for (std::uint64_t d = 0; d < p; ++d) {
          if ((a * d + p * p - (b * c) % p) % p != 1) continue;
          const Mat m{a, b, c, d};
          if (canon(m) != m || m == ident) continue;
          reps.push_back(m);
        }
  std::map<Mat, Element> index;
  for (std::size_t i = 0; i < reps.size(); ++i) index.emplace(reps[i], static_cast<Element>(i));
  const std::size_t order = reps.size();
  std::vector<std::string> names(order);
  std::vector<std::vector<Element>> rows(order, std::vector<Element>(order));
  for (std::size_t x = 0; x < order; ++x) {
    const Mat& m = reps[x];
    names[x] = "[" + std::to_string(m[0]) + "," + std::to_string(m[1]) + ";" + std::to_string(m[2]) + "," +
               std::to_string(m[3]) + "]";
    for (std::size_t y = 0; y < order; ++y) {
      const Mat& q = reps[y];
      const Mat prod{(m[0] * q[0] + m[1] * q[2]) % p, (m[0] * q[1] + m[1] * q[3]) % p,
                     (m[2] * q[0] + m[3] * q[2]) % p, (m[2] * q[1] + m[3] * q[3]) % p};
      rows[x][y] = index.at(canon(prod));
    }
  }
  auto g = FiniteGroup::from_table(std::move(names), std::move(rows), "psl2:" + std::to_string(p));
  g.set_generators({index.at(canon({1, 1, 0, 1})), index.at(canon({0, p - 1, 1, 0}))});
  return g;
}

// Mixed radix with the first factor most significant.
inline FiniteGroup build_product(const std::vector<FiniteGroup>& fs, std::string spec) {
  std::size_t order = 1;
  for (const auto& f : fs) order *= f.order();
  auto digits = [&](std::size_t x) {
    std::vector<Element> d(fs.size());
    for (std::size_t i = fs.size(); i-- > 0;) {
      d[i] = static_cast<Element>(x % fs[i].order());
      x /= fs[i].order();
    }
    return d;
  };
  auto compose = [&](const std::vector<Element>& d) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) x = x * fs[i].order() + d[i];
    return static_cast<Element>(x);
  };
  std::vector<std::string> names(order);
  std::vector<std::vector<Element>> rows(order, std::vector<Element>(order));
  std::vector<std::vector<Element>> all(order);
  for (std::size_t x = 0; x < order; ++x) all[x] = digits(x);
  for (std::size_t x = 0; x < order; ++x) {
    std::string nm = "(";
    for (std::size_t i = 0; i < fs.size(); ++i) nm += (i ? "," : "") + fs[i].name(all[x][i]);
    names[x] = nm + ")";
    for (std::size_t y = 0; y < order; ++y) {
      std::vector<Element> d(fs.size());
      for (std::size_t i = 0; i < fs.size(); ++i) d[i] = fs[i].mul(all[x][i], all[y][i]);
      rows[x][y] = compose(d);
    }
  }
  auto g = FiniteGroup::from_table(std::move(names), std::move(rows), std::move(spec));
  std::vector<Element> gens;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (Element s : fs[i].generators()) {
      std::vector<Element> d(fs.size(), 0);
      d[i] = s;
      gens.push_back(compose(d));
    }
  g.set_generators(std::move(gens));
  return g;
}

}  // namespace detail

/// Builds the group a spec describes. Deterministic: equal specs give equal tables.
inline FiniteGroup build_group(const GroupSpec& spec, std::uint64_t cap = kDefaultOrderCap) {
  const std::uint64_t order = spec_order(spec);
  if (order > cap || order > kHardOrderLimit)
    throw OrderCapExceeded("group " + to_string(spec) + " has order " + std::to_string(order) + " above cap " +
                           std::to_string(std::min(cap, kHardOrderLimit)));
  if (order == 0) throw InvalidInput("group " + to_string(spec) + " is empty");
  switch (spec.family) {
    case GroupFamily::Cyclic: return detail::build_cyclic(spec.parameter);
    case GroupFamily::Dihedral: return detail::build_dihedral(spec.parameter);
    case GroupFamily::Symmetric: return detail::build_symmetric(spec.parameter);
    case GroupFamily::Psl2: return detail::build_psl2(spec.parameter);
    case GroupFamily::TableFile: {
      std::ifstream in(spec.path);
      if (!in) throw InvalidInput("cannot open table file '" + spec.path + "'");
      return read_table(in, to_string(spec), cap);
    }
    case GroupFamily::Product: {
      std::vector<FiniteGroup> fs;
      for (const auto& f : spec.factors) fs.push_back(build_group(f, cap));
      return detail::build_product(fs, to_string(spec));
    }
  }
  throw InvalidInput("unsupported group spec");
}

inline FiniteGroup build_group(std::string_view spec, std::uint64_t cap = kDefaultOrderCap) {
  return build_group(parse_group_spec(spec), cap);
}

/// {h : gh = hg}
inline ElementSet centralizer(const FiniteGroup& g, Element x) {
  ElementSet c(g.order());
  for (Element h = 0; h < g.order(); ++h)
    if (g.commute(x, h)) c.insert(h);
  return c;
}

/// Min over non-identity g of |G| / |C(g)|; 1 exactly when G is abelian
/// (and for the trivial group). Finite measure of how far G is from commutative.
inline Rational min_centralizer_index(const FiniteGroup& g) {
  Rational best = 1;
  bool any = false;
  for (Element x = 1; x < g.order(); ++x) {
    const Rational idx(BigInt(g.order()), BigInt(centralizer(g, x).count()));
    if (!any || idx < best) best = idx;
    any = true;
  }
  return best;
}

/// Built-in groups of order at most `max_order`, used by exhaustive checks.
inline std::vector<std::string> group_library(std::uint64_t max_order) {
  std::vector<std::string> all;
  for (int n = 1; n <= 16; ++n) all.push_back("cyclic:" + std::to_string(n));
  for (int n = 2; n <= 8; ++n) all.push_back("dihedral:" + std::to_string(n));
  for (const char* s : {"sym:3", "psl2:2", "psl2:3", "cyclic:2*cyclic:2", "cyclic:2*cyclic:4",
                        "cyclic:2*cyclic:2*cyclic:2", "cyclic:2*cyclic:6", "cyclic:2*sym:3", "cyclic:3*cyclic:3",
                        "cyclic:4*cyclic:4", "cyclic:2*cyclic:8", "cyclic:2*dihedral:4",
                        "cyclic:2*cyclic:2*cyclic:4", "cyclic:2*cyclic:2*cyclic:2*cyclic:2", "sym:4", "psl2:5",
                        "psl2:7"})
    all.emplace_back(s);
  std::vector<std::string> out;
  for (auto& s : all)
    if (spec_order(parse_group_spec(s)) <= max_order) out.push_back(s);
  return out;
}

}  // namespace ncschur
