#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "ball.hpp"
#include "constructive.hpp"
#include "core.hpp"
#include "element_set.hpp"
#include "group.hpp"
#include "search.hpp"
#include "setcalc.hpp"
#include "tree.hpp"

namespace ncschur {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "ncschur-report/1";

// ---------------------------------------------------------------------------
// Scalars

/// Integers that fit in int64 are written as numbers, larger ones as strings.
inline Json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

inline BigInt bigint_from(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InvalidInput("expected an integer, got " + j.dump());
}

inline Json rational_json(const Rational& q) { return Json{{"num", bigint_json(numerator(q))}, {"den", bigint_json(denominator(q))}}; }

inline Rational rational_from(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) throw InvalidInput("expected {num, den}, got " + j.dump());
  const BigInt den = bigint_from(j.at("den"));
  if (den <= 0) throw InvalidInput("rational with non-positive denominator");
  return Rational(bigint_from(j.at("num")), den);
}

inline Json failure_json(const Failure& f) {
  return Json{{"kind", to_string(f.kind)}, {"stage", f.stage}, {"reason", f.reason}};
}

// ---------------------------------------------------------------------------
// Elements

/// Anything with name(Element) and size() or order().
template <typename G>
std::size_t universe_of(const G& g) {
  if constexpr (requires { g.order(); }) return g.order();
  else return g.size();
}

template <typename G>
Element element_from(const G& g, const Json& j) {
  if (!j.is_string()) throw InvalidInput("expected an element name, got " + j.dump());
  if constexpr (std::is_same_v<G, FiniteGroup>) return g.element(j.get<std::string>());
  else return g.find(j.get<std::string>());
}

template <typename G>
Json elements_json(const G& g, const std::vector<Element>& v) {
  Json out = Json::array();
  for (Element e : v) out.push_back(g.name(e));
  return out;
}

template <typename G>
std::vector<Element> elements_from(const G& g, const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected a list of element names");
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(element_from(g, x));
  return out;
}

template <typename G>
Json set_json(const G& g, const ElementSet& s) {
  return elements_json(g, s.elements());
}

template <typename G>
ElementSet set_from(const G& g, const Json& j) {
  ElementSet s(universe_of(g));
  for (Element e : elements_from(g, j)) s.insert(e);
  return s;
}

inline Json coloring_json(const Coloring& c) {
  return Json{{"num_colors", c.num_colors()}, {"colors", c.colors()}};
}

inline Coloring coloring_from(const Json& j, std::size_t order) {
  auto colors = j.at("colors").get<std::vector<Color>>();
  if (colors.size() != order)
    throw InvalidInput("embedded coloring has " + std::to_string(colors.size()) + " entries for a group of order " +
                       std::to_string(order));
  return Coloring(std::move(colors), j.at("num_colors").get<Color>());
}

// ---------------------------------------------------------------------------
// Structures

inline Json instance_json(const FiniteGroup& g, const PatternInstance& inst) {
  Json realized = Json::array();
  for (const auto& [w, v] : inst.realized) realized.push_back(Json{{"word", w.to_string()}, {"value", g.name(v)}});
  return Json{{"assignment", elements_json(g, inst.assignment)}, {"color", inst.color}, {"realized", realized}};
}

inline PatternInstance instance_from(const FiniteGroup& g, const Json& j) {
  PatternInstance inst;
  inst.assignment = elements_from(g, j.at("assignment"));
  inst.color = j.at("color").get<Color>();
  for (const auto& r : j.at("realized"))
    inst.realized.emplace_back(Word::parse(r.at("word").get<std::string>()), element_from(g, r.at("value")));
  return inst;
}

/// Vertices in id order as (label, parent); the root has parent -1.
inline Json tree_json(const FiniteGroup& g, const FiniteProductTree& t) {
  Json labels = Json::array(), parents = Json::array();
  for (const auto& v : t.vertices()) {
    labels.push_back(g.name(v.label));
    parents.push_back(v.parent == FiniteProductTree::kNoParent ? -1 : static_cast<std::int64_t>(v.parent));
  }
  return Json{{"labels", labels}, {"parents", parents}};
}

inline FiniteProductTree tree_from(const FiniteGroup& g, const Json& j) {
  const auto& labels = j.at("labels");
  const auto parents = j.at("parents").get<std::vector<std::int64_t>>();
  if (labels.size() != parents.size() || labels.empty()) throw InvalidInput("tree labels and parents disagree");
  if (parents[0] != -1) throw InvalidInput("tree vertex 0 must be the root");
  FiniteProductTree t(element_from(g, labels[0]));
  for (std::size_t i = 1; i < parents.size(); ++i) {
    if (parents[i] < 0 || static_cast<std::size_t>(parents[i]) >= i) throw InvalidInput("tree parents must precede children");
    t.add_child(static_cast<FiniteProductTree::VertexId>(parents[i]), element_from(g, labels[i]));
  }
  return t;
}

inline Json switching_tree_json(const FiniteGroup& g, const ColorSwitchingTree& cst) {
  Json levels = Json::array();
  for (const auto& depth : cst.level_sets) {
    Json sets = Json::array();
    for (const auto& s : depth) sets.push_back(elements_json(g, s));
    levels.push_back(sets);
  }
  return Json{{"rootless", cst.rootless}, {"level_sets", levels}, {"tree", tree_json(g, cst.tree)}};
}

inline ColorSwitchingTree switching_tree_from(const FiniteGroup& g, const Json& j) {
  ColorSwitchingTree cst;
  cst.rootless = j.at("rootless").get<bool>();
  for (const auto& depth : j.at("level_sets")) {
    std::vector<std::vector<Element>> sets;
    for (const auto& s : depth) sets.push_back(elements_from(g, s));
    cst.level_sets.push_back(std::move(sets));
  }
  cst.tree = tree_from(g, j.at("tree"));
  return cst;
}

inline Json ball_json(const FreeGroupBall& b, std::size_t margin) {
  Json gens = Json::array(), words = Json::array();
  for (std::size_t i = 0; i < b.rank(); ++i) gens.push_back(std::string(1, static_cast<char>('a' + i)));
  for (Element e = 0; e < b.size(); ++e) words.push_back(b.name(e));
  return Json{{"generators", gens}, {"radius", b.radius()}, {"guard_margin", margin}, {"words", words}};
}

// ---------------------------------------------------------------------------
// Files

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidInput("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidInput("cannot rename into " + path.string() + ": " + ec.message());
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace ncschur
