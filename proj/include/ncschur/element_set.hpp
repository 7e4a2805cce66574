#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace ncschur {

/// Subset of a universe {0, ..., size-1} stored as a word-parallel bitmask.
///
/// The universe is the element index range of a FiniteGroup (or of a ball in
/// a finitely generated group); the set does not own or reference the group,
/// so operations that need the multiplication take it explicitly.
class ElementSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kBits = 64;

  ElementSet() = default;
  explicit ElementSet(std::size_t universe) : size_(universe), words_((universe + kBits - 1) / kBits, 0) {}

  ElementSet(std::size_t universe, std::initializer_list<Element> members) : ElementSet(universe) {
    for (Element e : members) insert(e);
  }
  ElementSet(std::size_t universe, std::span<const Element> members) : ElementSet(universe) {
    for (Element e : members) insert(e);
  }

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (auto& w : s.words_) w = ~Word{0};
    s.trim();
    return s;
  }

  /// Builds a set from the low `universe` bits of a single mask (universe <= 64).
  static ElementSet from_mask(std::size_t universe, std::uint64_t mask) {
    ElementSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    s.trim();
    return s;
  }
  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  std::size_t universe() const { return size_; }
  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  bool contains(Element e) const {
    return e < size_ && ((words_[e / kBits] >> (e % kBits)) & 1U) != 0;
  }
  void insert(Element e) {
    check(e);
    words_[e / kBits] |= Word{1} << (e % kBits);
  }
  void erase(Element e) {
    check(e);
    words_[e / kBits] &= ~(Word{1} << (e % kBits));
  }
  void set(Element e, bool value) { value ? insert(e) : erase(e); }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (Word w : words_)
      if (w != 0) return false;
    return true;
  }

  /// Lowest member, or universe() when empty.
  Element first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] != 0) return static_cast<Element>(i * kBits + std::countr_zero(words_[i]));
    return static_cast<Element>(size_);
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Word w = words_[i];
      while (w != 0) {
        const int b = std::countr_zero(w);
        fn(static_cast<Element>(i * kBits + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    out.reserve(count());
    for_each([&](Element e) { out.push_back(e); });
    return out;
  }

  bool subset_of(const ElementSet& other) const {
    same(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }
  bool intersects(const ElementSet& other) const {
    same(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }
  std::size_t intersection_count(const ElementSet& other) const {
    same(other);
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    return c;
  }

  ElementSet& operator&=(const ElementSet& o) {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ElementSet& operator|=(const ElementSet& o) {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// Set difference.
  ElementSet& operator-=(const ElementSet& o) {
    same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  ElementSet complement() const {
    ElementSet s = *this;
    for (auto& w : s.words_) w = ~w;
    s.trim();
    return s;
  }

  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend bool operator<(const ElementSet& a, const ElementSet& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.words_ < b.words_;
  }

 private:
  void check(Element e) const {
    if (e >= size_) throw InvalidInput("element index outside set universe");
  }
  void same(const ElementSet& o) const {
    if (o.size_ != size_) throw InvalidInput("element sets over different universes");
  }
  void trim() {
    if (size_ % kBits != 0 && !words_.empty()) words_.back() &= (Word{1} << (size_ % kBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

}  // namespace ncschur
