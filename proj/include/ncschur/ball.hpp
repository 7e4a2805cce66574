#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core.hpp"
#include "element_set.hpp"
#include "group.hpp"
#include "setcalc.hpp"

namespace ncschur {

inline constexpr Element kUndefined = UINT32_MAX;

/// Ball of radius R in the free group on `rank` generators: reduced words in
/// shortlex order (letters a < A < b < B < ..., capital = inverse) with the
/// partial product recorded whenever the reduced result stays in the ball.
class FreeGroupBall {
 public:
  static constexpr std::size_t kMaxElements = 4096;

  FreeGroupBall(std::size_t rank, std::size_t radius, std::size_t guard_margin = 2)
      : rank_(rank), radius_(radius) {
    if (rank == 0 || rank > 13) throw InvalidInput("free group rank must be in 1..13");
    if (guard_margin > radius) throw InvalidInput("guard margin exceeds radius");
    words_.push_back({});
    index_.emplace(std::vector<std::uint8_t>{}, 0);
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= radius; ++len) {
      const std::size_t end = words_.size();
      for (std::size_t w = begin; w < end; ++w)
        for (std::uint8_t l = 0; l < 2 * rank; ++l) {
          const auto& base = words_[w];
          if (!base.empty() && base.back() == (l ^ 1U)) continue;
          auto next = base;
          next.push_back(l);
          if (words_.size() >= kMaxElements) throw InvalidInput("ball exceeds " + std::to_string(kMaxElements) + " elements");
          index_.emplace(next, static_cast<Element>(words_.size()));
          words_.push_back(std::move(next));
        }
      begin = end;
    }
    const std::size_t n = words_.size();
    inverse_.resize(n);
    for (Element e = 0; e < n; ++e) {
      std::vector<std::uint8_t> inv(words_[e].rbegin(), words_[e].rend());
      for (auto& l : inv) l ^= 1U;
      inverse_[e] = index_.at(inv);
    }
    table_.assign(n * n, kNoProduct);
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        const auto& u = words_[a];
        const auto& v = words_[b];
        std::size_t c = 0;
        while (c < u.size() && c < v.size() && u[u.size() - 1 - c] == (v[c] ^ 1U)) ++c;
        if (u.size() + v.size() - 2 * c > radius) continue;
        std::vector<std::uint8_t> w(u.begin(), u.end() - static_cast<std::ptrdiff_t>(c));
        w.insert(w.end(), v.begin() + static_cast<std::ptrdiff_t>(c), v.end());
        table_[a * n + b] = static_cast<std::uint16_t>(index_.at(w));
      }
    guard_ = ElementSet(n);
    unit_ball_.clear();
    for (Element e = 0; e < n; ++e) {
      if (words_[e].size() + guard_margin <= radius) guard_.insert(e);
      if (words_[e].size() <= 1) unit_ball_.push_back(e);
    }
  }

  std::size_t size() const { return words_.size(); }
  std::size_t rank() const { return rank_; }
  std::size_t radius() const { return radius_; }
  Element identity() const { return 0; }
  Element inverse(Element e) const { return inverse_[e]; }
  /// kUndefined when the reduced product leaves the ball.
  Element mul(Element a, Element b) const {
    const auto v = table_[static_cast<std::size_t>(a) * words_.size() + b];
    return v == kNoProduct ? kUndefined : v;
  }
  std::size_t length(Element e) const { return words_[e].size(); }
  const std::vector<std::uint8_t>& letters(Element e) const { return words_[e]; }
  /// Elements of length at most R - margin.
  const ElementSet& guard() const { return guard_; }
  /// Identity, generators and their inverses.
  const std::vector<Element>& unit_ball() const { return unit_ball_; }

  std::string name(Element e) const {
    if (words_[e].empty()) return "e";
    std::string s;
    for (auto l : words_[e]) s += static_cast<char>((l & 1U ? 'A' : 'a') + l / 2);
    return s;
  }
  Element find(const std::string& name) const {
    if (name == "e") return 0;
    std::vector<std::uint8_t> w;
    for (char ch : name) {
      if (ch >= 'a' && ch < 'a' + static_cast<char>(rank_)) w.push_back(static_cast<std::uint8_t>(2 * (ch - 'a')));
      else if (ch >= 'A' && ch < 'A' + static_cast<char>(rank_)) w.push_back(static_cast<std::uint8_t>(2 * (ch - 'A') + 1));
      else throw InvalidInput("bad free group word '" + name + "'");
    }
    auto it = index_.find(w);
    if (it == index_.end()) throw InvalidInput("word '" + name + "' is not a reduced word in the ball");
    return it->second;
  }

  /// Color by the generator of the first letter; the identity gets color 0.
  Coloring first_letter_coloring() const {
    std::vector<Color> c(size(), 0);
    for (Element e = 1; e < size(); ++e) c[e] = words_[e].front() / 2;
    return Coloring(std::move(c), static_cast<Color>(rank_));
  }

 private:
  static constexpr std::uint16_t kNoProduct = UINT16_MAX;

  std::size_t rank_;
  std::size_t radius_;
  std::vector<std::vector<std::uint8_t>> words_;
  std::map<std::vector<std::uint8_t>, Element> index_;
  std::vector<Element> inverse_;
  std::vector<std::uint16_t> table_;
  ElementSet guard_;
  std::vector<Element> unit_ball_;
};

}  // namespace ncschur
