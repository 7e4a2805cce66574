#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "group.hpp"

namespace ncschur {

inline constexpr int kMaxPatternK = 6;

/// Formal non-repeating product of variables x_i, multiplied left to right.
class Word {
 public:
  using Index = std::uint8_t;

  Word() = default;
  explicit Word(std::vector<Index> vars) : vars_(std::move(vars)) { validate(); }
  Word(std::initializer_list<int> vars) {
    for (int v : vars) vars_.push_back(static_cast<Index>(v));
    validate();
  }

  /// Parses the display format `x0.x1.x2`.
  static Word parse(std::string_view text) {
    std::vector<Index> vars;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto dot = text.find('.', pos);
      if (dot == std::string_view::npos) dot = text.size();
      const auto tok = text.substr(pos, dot - pos);
      if (tok.size() < 2 || tok[0] != 'x') throw InvalidInput("bad word token '" + std::string(tok) + "'");
      vars.push_back(static_cast<Index>(detail::parse_uint(tok.substr(1), "variable index")));
      pos = dot + 1;
    }
    return Word(std::move(vars));
  }

  std::size_t size() const { return vars_.size(); }
  Index operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Index>& vars() const { return vars_; }
  bool uses(Index v) const { return std::find(vars_.begin(), vars_.end(), v) != vars_.end(); }
  Index max_var() const { return *std::max_element(vars_.begin(), vars_.end()); }

  /// Concatenation; the operands must use disjoint variables.
  friend Word operator*(const Word& a, const Word& b) {
    std::vector<Index> v = a.vars_;
    v.insert(v.end(), b.vars_.begin(), b.vars_.end());
    return Word(std::move(v));
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < vars_.size(); ++i) out += (i ? ".x" : "x") + std::to_string(vars_[i]);
    return out;
  }

  /// Shorter words first, then lexicographic on the index sequence.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.vars_.size() <=> b.vars_.size(); c != 0) return c;
    return a.vars_ <=> b.vars_;
  }
  friend bool operator==(const Word& a, const Word& b) = default;

 private:
  void validate() const {
    if (vars_.empty()) throw InvalidInput("a word must be non-empty");
    std::vector<Index> sorted = vars_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidInput("a word may use each variable at most once");
  }

  std::vector<Index> vars_;
};

/// Deduplicated set of formal words (by sequence, not by group value).
using WordSet = std::set<Word>;

/// FP(x_{i_1}, ..., x_{i_n}): products over every non-empty subset of the
/// listed variables, taken in list order.
inline WordSet fp_words(std::span<const int> indices) {
  if (indices.size() > 20) throw InvalidInput("fp_words supports at most 20 variables");
  WordSet out;
  const std::uint32_t n = static_cast<std::uint32_t>(indices.size());
  std::vector<Word::Index> seq;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    seq.clear();
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask & (1U << i)) seq.push_back(static_cast<Word::Index>(indices[i]));
    out.insert(Word(seq));
  }
  return out;
}
inline WordSet fp_words(std::initializer_list<int> indices) {
  return fp_words(std::span<const int>(indices.begin(), indices.size()));
}

/// Forward: ascending index order. Backward: descending.
inline Word directed_product_word(std::set<int> indices, Direction direction) {
  if (indices.empty()) throw InvalidInput("directed product over an empty index set");
  std::vector<Word::Index> v(indices.begin(), indices.end());
  if (direction == Direction::Backward) std::reverse(v.begin(), v.end());
  return Word(std::move(v));
}

/// x_i x_{i+1} ... x_j
inline Word consecutive_word(int i, int j) {
  std::vector<Word::Index> v;
  for (int a = i; a <= j; ++a) v.push_back(static_cast<Word::Index>(a));
  return Word(std::move(v));
}

/// The monochromatic pattern for k+1 variables:
/// { x_i...x_j , (->prod_{a in I} x_a) x_0...x_j : i <= j in {0..k}, I ⊆ {j+1..k} }.
inline WordSet pattern_words(int k) {
  if (k < 0 || k > kMaxPatternK) throw InvalidInput("pattern_words supports 0 <= k <= 6");
  WordSet out;
  for (int i = 0; i <= k; ++i)
    for (int j = i; j <= k; ++j) out.insert(consecutive_word(i, j));
  for (int j = 0; j <= k; ++j) {
    const int free = k - j;
    for (std::uint32_t mask = 0; mask < (1U << free); ++mask) {
      std::vector<Word::Index> v;
      for (int a = 0; a < free; ++a)
        if (mask & (1U << a)) v.push_back(static_cast<Word::Index>(j + 1 + a));
      for (int a = 0; a <= j; ++a) v.push_back(static_cast<Word::Index>(a));
      out.insert(Word(std::move(v)));
    }
  }
  return out;
}

/// Every ordered product of distinct variables among x_0..x_{n-1}.
inline WordSet all_distinct_products(int n) {
  if (n < 1 || n > 7) throw InvalidInput("all_distinct_products supports 1 <= n <= 7");
  WordSet out;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<Word::Index> v;
    for (int a = 0; a < n; ++a)
      if (mask & (1U << a)) v.push_back(static_cast<Word::Index>(a));
    do out.insert(Word(v));
    while (std::next_permutation(v.begin(), v.end()));
  }
  return out;
}

/// Left-to-right Cayley product of the assigned elements.
inline Element eval_word(const Word& w, std::span<const Element> assignment, const FiniteGroup& g) {
  Element acc = g.identity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= assignment.size())
      throw InvalidInput("no assignment for variable x" + std::to_string(w[i]));
    acc = g.mul(acc, assignment[w[i]]);
  }
  return acc;
}

}  // namespace ncschur
