#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core.hpp"
#include "group.hpp"

namespace ncschur {

/// Rooted tree whose vertices carry group elements. A rooted path
/// v_0, v_1, ..., v_j is identified with the product v_0 * ... * v_j.
class FiniteProductTree {
 public:
  using VertexId = std::uint32_t;
  static constexpr VertexId kRoot = 0;
  static constexpr VertexId kNoParent = UINT32_MAX;

  struct Vertex {
    Element label = 0;
    VertexId parent = kNoParent;
    std::uint32_t depth = 0;
    std::vector<VertexId> children;
  };

  FiniteProductTree() : FiniteProductTree(0) {}
  explicit FiniteProductTree(Element root_label) { vertices_.push_back({root_label, kNoParent, 0, {}}); }

  VertexId add_child(VertexId parent, Element label) {
    const auto id = static_cast<VertexId>(vertices_.size());
    vertices_.push_back({label, parent, vertices_.at(parent).depth + 1, {}});
    vertices_[parent].children.push_back(id);
    return id;
  }

  std::size_t size() const { return vertices_.size(); }
  const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  Element label(VertexId v) const { return vertices_.at(v).label; }
  const std::vector<VertexId>& children(VertexId v) const { return vertices_.at(v).children; }

  /// Length of the longest rooted path, in edges.
  std::uint32_t height() const {
    std::uint32_t h = 0;
    for (const auto& v : vertices_) h = std::max(h, v.depth);
    return h;
  }

  /// n when every vertex above the deepest level has exactly n children, else 0.
  std::size_t uniform_branching() const {
    const auto h = height();
    std::size_t n = 0;
    for (const auto& v : vertices_) {
      if (v.depth == h) {
        if (!v.children.empty()) return 0;
        continue;
      }
      if (n == 0) n = v.children.size();
      if (v.children.size() != n) return 0;
    }
    return n;
  }

  /// Vertex ids from the root down to v.
  std::vector<VertexId> path_to(VertexId v) const {
    std::vector<VertexId> p;
    for (VertexId cur = v; cur != kNoParent; cur = vertices_.at(cur).parent) p.push_back(cur);
    std::reverse(p.begin(), p.end());
    return p;
  }

  Element product(const FiniteGroup& g, std::span<const VertexId> path) const {
    Element acc = g.identity();
    for (auto v : path) acc = g.mul(acc, label(v));
    return acc;
  }

  /// Same labels and shape below a and b.
  bool same_shape(VertexId a, VertexId b) const {
    const auto& va = vertices_.at(a);
    const auto& vb = vertices_.at(b);
    if (va.label != vb.label || va.children.size() != vb.children.size()) return false;
    for (std::size_t i = 0; i < va.children.size(); ++i)
      if (!same_shape(va.children[i], vb.children[i])) return false;
    return true;
  }

  /// Follows child positions from v; returns the visited ids (excluding v).
  std::vector<VertexId> follow(VertexId v, std::span<const std::uint32_t> positions) const {
    std::vector<VertexId> out;
    for (auto pos : positions) {
      v = vertices_.at(v).children.at(pos);
      out.push_back(v);
    }
    return out;
  }

  friend bool operator==(const FiniteProductTree& a, const FiniteProductTree& b) {
    if (a.vertices_.size() != b.vertices_.size()) return false;
    for (std::size_t i = 0; i < a.vertices_.size(); ++i) {
      const auto& x = a.vertices_[i];
      const auto& y = b.vertices_[i];
      if (x.label != y.label || x.parent != y.parent || x.children != y.children) return false;
    }
    return true;
  }

 private:
  std::vector<Vertex> vertices_;
};

/// Complete tree of the given height in which every vertex at depth d has
/// children labeled `levels[d]` (in order).
inline FiniteProductTree uniform_tree(Element root, const std::vector<std::vector<Element>>& levels,
                                      std::size_t max_vertices) {
  std::size_t total = 1, width = 1;
  for (const auto& l : levels) {
    width *= l.size();
    total += width;
    if (total > max_vertices) throw BudgetExceeded("tree would exceed " + std::to_string(max_vertices) + " vertices");
  }
  FiniteProductTree t(root);
  std::vector<FiniteProductTree::VertexId> frontier{FiniteProductTree::kRoot};
  for (const auto& l : levels) {
    std::vector<FiniteProductTree::VertexId> next;
    for (auto v : frontier)
      for (Element e : l) next.push_back(t.add_child(v, e));
    frontier = std::move(next);
  }
  return t;
}

}  // namespace ncschur
