#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ball.hpp"
#include "constructive.hpp"
#include "core.hpp"
#include "group.hpp"
#include "pws.hpp"
#include "random.hpp"
#include "report.hpp"
#include "search.hpp"
#include "setcalc.hpp"
#include "words.hpp"

namespace ncschur {

/// Parsed options for one command run.
struct RunConfig {
  /// "search", "pws focus", "group gen", ...
  std::string command;
  std::string group = "sym:3";
  std::uint64_t order_cap = kDefaultOrderCap;
  /// random | constant | mod | block:B | file:PATH | first-letter
  std::string coloring = "random";
  Color colors = 2;
  std::uint64_t seed = 0;
  int k = 1;
  bool noncommuting = false;
  /// Instances kept in the report; 0 keeps all.
  std::size_t limit = 100;
  /// 0 uses default_budget().
  std::uint64_t budget = 0;
  unsigned threads = 1;
  /// Set specs: comma separated names, all, none, class:i, complement:i, random:N.
  std::string set;
  std::string set_b;
  std::string direction = "backward";
  std::string side = "left";
  std::string kind = "weak";
  std::string delta = "1/2";
  std::string theta;
  bool large = false;
  /// Comma separated names; empty draws ceil(2/eps) seeded elements.
  std::string ys;
  bool iterated = false;
  std::size_t lists = 2;
  std::size_t length = 0;
  std::size_t m = 1;
  std::size_t n = 1;
  bool rootless = false;
  bool use_tree = true;
  std::uint64_t fp_samples = 100000;
  bool force_sampling = false;
  PwsParams inner;
  PwsParams outer;
  std::size_t samples = 64;
  std::size_t witness_radius = 2;
  std::size_t guard_margin = 2;
  /// group check: table file to validate
  std::string table;
};

struct RunOutput {
  Json report;
  int exit_code = 0;
};

/// 0 ok, 2 first-class failure, 1 otherwise.
inline int exit_code_for(const Json& report) {
  const auto status = report.value("status", std::string("error"));
  if (status == "ok") return 0;
  if (status == "failed") return 2;
  return 1;
}

namespace cli_detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

/// Splits on commas outside parentheses.
inline std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(trim(text)));
    const BigInt den(trim(text.substr(slash + 1)));
    if (den <= 0) throw InvalidInput("denominator must be positive in '" + text + "'");
    return Rational(BigInt(trim(text.substr(0, slash))), den);
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidInput("bad rational '" + text + "'");
  }
}

inline bool is_ball_spec(const std::string& spec) { return spec.rfind("free:", 0) == 0; }

/// free:RANK:RADIUS
inline std::pair<std::size_t, std::size_t> parse_ball_spec(const std::string& spec) {
  const auto rest = spec.substr(5);
  const auto colon = rest.find(':');
  if (colon == std::string::npos) throw InvalidInput("ball spec is free:RANK:RADIUS, got '" + spec + "'");
  return {detail::parse_uint(rest.substr(0, colon), "rank"), detail::parse_uint(rest.substr(colon + 1), "radius")};
}

inline std::vector<Color> random_colors(std::size_t n, Color k, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  std::vector<Color> c(n);
  for (auto& x : c) x = static_cast<Color>(rng.below(k));
  return c;
}

/// Builds the coloring named by cfg.coloring over a universe of n elements.
inline Coloring make_coloring(const RunConfig& cfg, std::size_t n, const FiniteGroup* g, const FreeGroupBall* ball) {
  const std::string& src = cfg.coloring;
  if (cfg.colors == 0) throw InvalidInput("--colors must be positive");
  if (src == "random") return Coloring(random_colors(n, cfg.colors, cfg.seed), cfg.colors);
  if (src == "constant") return Coloring(std::vector<Color>(n, 0), cfg.colors);
  if (src == "mod") {
    std::vector<Color> c(n);
    for (std::size_t e = 0; e < n; ++e) c[e] = static_cast<Color>(e % cfg.colors);
    return Coloring(std::move(c), cfg.colors);
  }
  if (src.rfind("block:", 0) == 0) {
    const auto b = detail::parse_uint(src.substr(6), "block size");
    if (b == 0) throw InvalidInput("block size must be positive");
    std::vector<Color> c(n);
    for (std::size_t e = 0; e < n; ++e) c[e] = static_cast<Color>((e / b) % cfg.colors);
    return Coloring(std::move(c), cfg.colors);
  }
  if (src == "first-letter") {
    if (!ball) throw InvalidInput("first-letter coloring needs a free group ball");
    return ball->first_letter_coloring();
  }
  if (src.rfind("file:", 0) == 0) {
    if (!g) throw InvalidInput("coloring files are only supported for finite groups");
    std::ifstream in(src.substr(5));
    if (!in) throw InvalidInput("cannot read coloring file " + src.substr(5));
    return read_coloring(in, *g);
  }
  throw InvalidInput("unknown coloring source '" + src + "'");
}

template <typename G>
Element lookup(const G& g, const std::string& name) {
  if constexpr (std::is_same_v<G, FiniteGroup>) return g.element(name);
  else return g.find(name);
}

/// Resolves a set spec; `fallback` is used when the spec is empty.
template <typename G>
ElementSet make_set(const G& g, std::size_t n, const std::string& spec, const Coloring& c, std::uint64_t seed,
                    const std::string& fallback) {
  const std::string s = spec.empty() ? fallback : spec;
  if (s == "all") return ElementSet::full(n);
  if (s == "none") return ElementSet(n);
  if (s.rfind("class:", 0) == 0) {
    const auto col = detail::parse_uint(s.substr(6), "color");
    if (col >= c.num_colors()) throw InvalidInput("no color class " + s.substr(6));
    return c.color_class(static_cast<Color>(col));
  }
  if (s.rfind("complement:", 0) == 0) {
    const auto col = detail::parse_uint(s.substr(11), "color");
    if (col >= c.num_colors()) throw InvalidInput("no color class " + s.substr(11));
    return c.color_class(static_cast<Color>(col)).complement();
  }
  if (s.rfind("random:", 0) == 0) {
    const auto size = detail::parse_uint(s.substr(7), "set size");
    if (size > n) throw InvalidInput("random set larger than the group");
    Xorshift64Star rng(seed ^ 0x5E7ULL);
    ElementSet out(n);
    for (auto e : rng.sample_without_replacement(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(size)))
      out.insert(e);
    return out;
  }
  ElementSet out(n);
  for (const auto& name : split_names(s)) out.insert(lookup(g, name));
  return out;
}

inline Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw InvalidInput("side must be left or right");
}

inline Direction parse_direction(const std::string& s) {
  if (s == "forward") return Direction::Forward;
  if (s == "backward") return Direction::Backward;
  throw InvalidInput("direction must be forward or backward");
}

inline RecurrenceKind parse_kind(const std::string& s) {
  if (s == "weak") return RecurrenceKind::Weak;
  if (s == "plain") return RecurrenceKind::Plain;
  if (s == "nice") return RecurrenceKind::Nice;
  throw InvalidInput("kind must be weak, plain or nice");
}

inline Json group_json(const FiniteGroup& g) {
  return Json{{"spec", g.spec()}, {"order", g.order()}, {"abelian", g.is_abelian()}};
}

inline Json header(const RunConfig& cfg, Json group, const std::string& spec) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = cfg.command;
  j["group"] = std::move(group);
  j["spec"] = spec;
  j["seed"] = cfg.seed;
  j["prng"] = "xorshift64* seeded via splitmix64";
  return j;
}

inline void set_status(Json& rep, const std::optional<Failure>& f) {
  if (f) {
    rep["status"] = "failed";
    rep["failure"] = failure_json(*f);
  } else {
    rep["status"] = "ok";
  }
}

/// Expected count of monochromatic assignments when each word value gets an
/// independent uniform color: |G|^(k+1) (r+1)^(1 - #words).
inline Rational independent_model(std::size_t order, int k, Color colors) {
  const auto words = pattern_words(k).size();
  BigInt space = 1;
  for (int i = 0; i <= k; ++i) space *= order;
  BigInt den = 1;
  for (std::size_t i = 1; i < words; ++i) den *= colors;
  return Rational(space, den);
}

inline Json pws_params_json(const PwsParams& p) { return Json{{"sigma", p.sigma}, {"phi", p.phi}}; }

inline PwsParams pws_params_from(const Json& j, std::uint64_t budget) {
  PwsParams p;
  p.sigma = j.at("sigma").get<std::size_t>();
  p.phi = j.at("phi").get<std::size_t>();
  p.budget = budget;
  return p;
}

template <typename G>
Json opt_elements(const G& g, const std::optional<std::vector<Element>>& v) {
  return v ? elements_json(g, *v) : Json(nullptr);
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------
// Commands on finite groups

namespace commands {

using namespace cli_detail;

inline Json group_report(const RunConfig& cfg, const FiniteGroup& g) {
  Json rep = header(cfg, group_json(g), g.spec());
  rep["elements"] = g.names();
  rep["generators"] = elements_json(g, g.generators());
  rep["min_centralizer_index"] = rational_json(min_centralizer_index(g));
  set_status(rep, std::nullopt);
  return rep;
}

inline Json color_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  rep["params"] = Json{{"source", cfg.coloring}, {"colors", c.num_colors()}};
  rep["coloring"] = coloring_json(c);
  Json dens = Json::array();
  for (const auto& cls : c.classes()) dens.push_back(rational_json(density(cls)));
  rep["densities"] = dens;
  set_status(rep, std::nullopt);
  return rep;
}

inline Json pattern_words_report(const RunConfig& cfg) {
  const auto words = pattern_words(cfg.k);
  Json rep;
  rep["schema"] = kReportSchema;
  rep["command"] = cfg.command;
  rep["params"] = Json{{"k", cfg.k}};
  Json w = Json::array(), missing = Json::array();
  for (const auto& x : words) w.push_back(x.to_string());
  for (const auto& x : all_distinct_products(cfg.k + 1))
    if (!words.count(x)) missing.push_back(x.to_string());
  rep["words"] = w;
  rep["missing"] = missing;
  set_status(rep, std::nullopt);
  return rep;
}

inline SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions o;
  o.k = cfg.k;
  o.noncommuting = cfg.noncommuting;
  o.budget = cfg.budget ? cfg.budget : default_budget();
  o.threads = cfg.threads;
  return o;
}

inline Json search_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  rep["params"] = Json{{"k", cfg.k}, {"noncommuting", cfg.noncommuting}, {"limit", cfg.limit}};
  rep["coloring"] = coloring_json(c);
  SearchOptions o = search_options(cfg);
  bool exhaustive = true;
  std::uint64_t total = 0;
  try {
    total = count_pattern_instances(g, c, o);
  } catch (const BudgetExceeded&) {
    if (cfg.limit == 0) throw;
    exhaustive = false;
  }
  o.limit = cfg.limit;
  const auto found = find_pattern_instances(g, c, o);
  if (!exhaustive) total = found.size();
  rep["exhaustive"] = exhaustive;
  rep["observed"] = rational_json(Rational(BigInt(total)));
  rep["expected"] = rational_json(independent_model(g.order(), cfg.k, c.num_colors()));
  rep["expected_model"] = "independent uniform colors per word";
  Json inst = Json::array();
  for (const auto& x : found) inst.push_back(instance_json(g, x));
  rep["instances"] = inst;
  set_status(rep, total ? std::nullopt
                        : std::optional<Failure>(Failure{FailureKind::NotFound, "search", "no monochromatic instance"}));
  return rep;
}

inline Json many_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  rep["params"] = Json{{"k", cfg.k}, {"noncommuting", cfg.noncommuting}};
  rep["coloring"] = coloring_json(c);
  const auto m = many_statistic(g, c, search_options(cfg));
  Json levels = Json::array();
  for (const auto& l : m.levels)
    levels.push_back(Json{{"variable", l.variable}, {"valid_prefixes", l.valid_prefixes}, {"density", rational_json(l.density)}});
  rep["levels"] = levels;
  rep["observed"] = rational_json(Rational(BigInt(m.instances)));
  rep["expected"] = rational_json(independent_model(g.order(), cfg.k, c.num_colors()));
  rep["outer_density"] = rational_json(m.outer_density);
  set_status(rep, m.instances ? std::nullopt
                              : std::optional<Failure>(Failure{FailureKind::NotFound, "many", "no monochromatic instance"}));
  return rep;
}

inline Json fp_json(const FpCountReport& r) {
  Json j{{"k", r.k}, {"direction", to_string(r.direction)}, {"sampled", r.sampled}, {"samples", r.samples},
         {"hits", r.hits}, {"count", rational_json(r.count)}, {"expected", rational_json(r.expected)}};
  j["ratio"] = r.ratio ? rational_json(*r.ratio) : Json(nullptr);
  return j;
}

inline FpCountOptions fp_options(const RunConfig& cfg, int k, std::size_t order) {
  FpCountOptions o;
  o.k = k;
  o.direction = parse_direction(cfg.direction);
  o.force_sampling = cfg.force_sampling;
  o.samples = cfg.fp_samples;
  o.seed = cfg.seed;
  const auto budget = cfg.budget ? cfg.budget : default_budget();
  if (saturating_power(order, k + 1) > budget) o.force_sampling = true;
  return o;
}

inline Json fp_count_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  const std::string fallback = "class:0";
  const auto a = make_set(g, g.order(), cfg.set, c, cfg.seed, fallback);
  rep["params"] = Json{{"k", cfg.k}, {"direction", cfg.direction}, {"samples", cfg.fp_samples},
                       {"force_sampling", cfg.force_sampling}};
  rep["coloring"] = coloring_json(c);
  rep["set"] = set_json(g, a);
  const auto main = fp_tuple_count(g, a, fp_options(cfg, cfg.k, g.order()));
  rep["result"] = fp_json(main);
  rep["observed"] = rational_json(main.count);
  rep["expected"] = rational_json(main.expected);
  Json profile = Json::array();
  for (int k = 0; k <= 3; ++k) profile.push_back(fp_json(fp_tuple_count(g, a, fp_options(cfg, k, g.order()))));
  rep["profile"] = profile;
  set_status(rep, std::nullopt);
  return rep;
}

inline Json mixing_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  const auto a = make_set(g, g.order(), cfg.set, c, cfg.seed, "class:0");
  const auto b = cfg.set_b.empty() ? a : make_set(g, g.order(), cfg.set_b, c, cfg.seed + 1, "class:0");
  rep["coloring"] = coloring_json(c);
  rep["set"] = set_json(g, a);
  rep["set_b"] = set_json(g, b);
  const auto m = mixing_statistic(g, a, b);
  rep["observed"] = rational_json(Rational(BigInt(m.observed)));
  rep["expected"] = rational_json(m.expected);
  rep["relative_deviation"] = rational_json(m.relative_deviation);
  set_status(rep, std::nullopt);
  return rep;
}

inline RecurrenceOptions recurrence_options(const RunConfig& cfg) {
  RecurrenceOptions o;
  o.side = parse_side(cfg.side);
  o.kind = parse_kind(cfg.kind);
  o.delta = parse_rational(cfg.delta);
  o.large = cfg.large;
  if (!cfg.theta.empty()) o.theta = parse_rational(cfg.theta);
  o.max_order = 24;
  return o;
}

inline Json recurrence_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  if (cfg.set.empty()) throw InvalidInput("recurrence needs --set");
  const auto s = make_set(g, g.order(), cfg.set, c, cfg.seed, "");
  rep["params"] = Json{{"side", cfg.side}, {"kind", cfg.kind}, {"delta", rational_json(parse_rational(cfg.delta))},
                       {"large", cfg.large}};
  rep["params"]["theta"] = cfg.theta.empty() ? Json(nullptr) : rational_json(parse_rational(cfg.theta));
  rep["coloring"] = coloring_json(c);
  rep["set"] = set_json(g, s);
  const auto r = classify_recurrence(g, s, recurrence_options(cfg));
  rep["holds"] = r.holds;
  rep["counterexample"] = r.counterexample ? set_json(g, *r.counterexample) : Json(nullptr);
  rep["sets_checked"] = r.sets_checked;
  set_status(rep, std::nullopt);
  return rep;
}

inline std::vector<Element> random_elements(std::size_t n, std::size_t count, Xorshift64Star& rng) {
  std::vector<Element> out(count);
  for (auto& x : out) x = static_cast<Element>(rng.below(n));
  return out;
}

inline Json pigeonhole_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  const auto a = make_set(g, g.order(), cfg.set, c, cfg.seed, "class:0");
  if (a.empty()) throw InvalidInput("pigeonhole needs a non-empty set");
  rep["coloring"] = coloring_json(c);
  rep["set"] = set_json(g, a);
  Xorshift64Star rng(cfg.seed ^ 0x9E0ULL);
  if (!cfg.iterated) {
    rep["params"] = Json{{"side", cfg.side}, {"iterated", false}};
    std::vector<Element> ys;
    if (!cfg.ys.empty()) {
      for (const auto& nm : split_names(cfg.ys)) ys.push_back(g.element(nm));
    } else {
      ys = random_elements(g.order(), cfg.length ? cfg.length : pigeonhole_length(a), rng);
    }
    rep["ys"] = elements_json(g, ys);
    const auto d = density(a);
    rep["bound"] = rational_json(d * d / 2);
    auto res = density_pigeonhole(g, a, ys, parse_side(cfg.side));
    if (res) {
      rep["result"] = Json{{"i", res->i}, {"j", res->j}, {"y", g.name(res->y)}, {"witness", set_json(g, res->witness)},
                           {"witness_density", rational_json(res->witness_density)}};
      set_status(rep, std::nullopt);
    } else {
      set_status(rep, res.failure());
    }
    return rep;
  }
  rep["params"] = Json{{"iterated", true}, {"k", cfg.k}, {"lists", cfg.lists}};
  const std::size_t len = cfg.length ? cfg.length : 16;
  std::vector<std::vector<Element>> sprime;
  for (std::size_t i = 0; i < cfg.lists; ++i) sprime.push_back(random_elements(g.order(), len, rng));
  Json lists = Json::array();
  for (const auto& l : sprime) lists.push_back(elements_json(g, l));
  rep["lists"] = lists;
  IteratedPigeonholeOptions o;
  o.k = static_cast<std::size_t>(cfg.k);
  auto res = iterated_pigeonhole(g, a, sprime, o);
  if (res) {
    Json sets = Json::array();
    for (const auto& s : res->sets) sets.push_back(elements_json(g, s));
    rep["result"] = Json{{"sets", sets}, {"b", set_json(g, res->b)}, {"b_density", rational_json(res->b_density)},
                         {"bound", rational_json(res->bound)}, {"used_prefix", res->used_prefix}};
    set_status(rep, std::nullopt);
  } else {
    set_status(rep, res.failure());
  }
  return rep;
}

inline Json switch_tree_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  const auto a = make_set(g, g.order(), cfg.set, c, cfg.seed, "class:0");
  rep["params"] = Json{{"m", cfg.m}, {"n", cfg.n}, {"rootless", cfg.rootless}};
  rep["coloring"] = coloring_json(c);
  rep["set"] = set_json(g, a);
  SwitchTreeOptions o;
  o.m = cfg.m;
  o.n = cfg.n;
  o.rootless = cfg.rootless;
  auto res = build_color_switching_tree(g, c, a, c.classes(), o);
  if (res) {
    rep["tree"] = switching_tree_json(g, res->tree);
    rep["roots"] = set_json(g, res->roots);
    set_status(rep, std::nullopt);
  } else {
    set_status(rep, res.failure());
  }
  return rep;
}

inline Json focus_report(const RunConfig& cfg, const FiniteGroup& g, const Coloring& c) {
  Json rep = header(cfg, group_json(g), g.spec());
  rep["params"] = Json{{"k", cfg.k}, {"noncommuting", cfg.noncommuting}, {"n", cfg.n}, {"use_tree", cfg.use_tree},
                       {"limit", cfg.limit}};
  rep["coloring"] = coloring_json(c);
  FocusOptions o;
  o.k = static_cast<std::size_t>(cfg.k);
  o.noncommuting = cfg.noncommuting;
  o.n = cfg.n;
  o.use_tree = cfg.use_tree;
  o.limit = cfg.limit;
  const auto res = focusing_construct(g, c, o);
  Json a = Json::array();
  for (const auto& s : res.state.a) a.push_back(set_json(g, s));
  rep["state"] = Json{{"r", res.state.r}, {"k", res.state.k}, {"epsilon", rational_json(res.state.epsilon)}, {"a", a},
                      {"y", elements_json(g, res.state.y)}, {"f", res.state.f}};
  rep["mode"] = res.mode;
  rep["tree"] = res.tree ? switching_tree_json(g, *res.tree) : Json(nullptr);
  rep["notes"] = res.notes;
  rep["steps"] = res.steps;
  rep["color"] = res.color;
  rep["x"] = elements_json(g, res.x);
  rep["x0_set"] = res.x0_set.universe() ? set_json(g, res.x0_set) : Json::array();
  Json inst = Json::array();
  for (const auto& x : res.instances) inst.push_back(instance_json(g, x));
  rep["instances"] = inst;
  set_status(rep, res.failure);
  return rep;
}

// ---------------------------------------------------------------------------
// pws commands, generic over the context

template <typename Ctx>
Json pws_check_payload(const Ctx& ctx, const ElementSet& a, const PwsParams& p) {
  Json j;
  const auto thick = is_right_thick(ctx, a, p.phi);
  j["thick"] = Json{{"holds", thick.thick}, {"failing", thick.thick ? Json(nullptr) : elements_json(ctx, thick.failing)}};
  const auto syn = is_left_syndetic(ctx, a, p.sigma, p.budget);
  j["syndetic"] = Json{{"holds", syn.has_value()}, {"witness", opt_elements(ctx, syn)}};
  const auto pws = is_piecewise_syndetic(ctx, a, p);
  j["pws"] = Json{{"holds", pws.has_value()}, {"witness", pws ? elements_json(ctx, pws->f) : Json(nullptr)}};
  return j;
}

template <typename Ctx>
Json pws_pigeonhole_payload(const Ctx& ctx, const ElementSet& a, const PwsParams& p, std::optional<Failure>& failure) {
  Json j;
  auto res = pws_pigeonhole(ctx, a, p);
  if (!res) {
    failure = res.failure();
    return j;
  }
  j["returned"] = set_json(ctx, res->returned);
  j["syndetic_witness"] = elements_json(ctx, res->syndetic_witness);
  j["a_witness"] = elements_json(ctx, res->a_witness.f);
  j["member_params"] = pws_params_json(res->member);
  return j;
}

template <typename Ctx>
Json pws_focus_payload(const Ctx& ctx, const Coloring& c, const PwsFocusParams& p, std::optional<Failure>& failure) {
  const auto res = pws_focusing(ctx, c, p);
  Json j;
  Json a = Json::array(), steps = Json::array();
  for (const auto& s : res.a) a.push_back(set_json(ctx, s));
  for (const auto& st : res.steps)
    steps.push_back(Json{{"s_size", st.s.count()},
                         {"s_syndetic", opt_elements(ctx, st.s_syndetic)},
                         {"chosen_color", st.chosen_color},
                         {"chosen_size", st.s_chosen.universe() ? st.s_chosen.count() : 0}});
  j["state"] = Json{{"a", a}, {"y", elements_json(ctx, res.y)}, {"colors", res.colors}};
  j["steps"] = steps;
  j["notes"] = res.notes;
  if (res.ok()) {
    j["repeat"] = Json{{"i", res.i}, {"j", res.j}, {"color", res.color}};
    j["y_set"] = set_json(ctx, res.y_set);
    j["x_set"] = set_json(ctx, res.x_set);
    j["y_set_witness"] = res.y_set_witness ? elements_json(ctx, res.y_set_witness->f) : Json(nullptr);
    j["x_set_witness"] = res.x_set_witness ? elements_json(ctx, res.x_set_witness->f) : Json(nullptr);
    Json samples = Json::array();
    for (auto [x, y] : res.samples) samples.push_back(Json::array({ctx.name(x), ctx.name(y)}));
    j["samples"] = samples;
  }
  failure = res.failure;
  return j;
}

inline PwsFocusParams focus_params(const RunConfig& cfg) {
  PwsFocusParams p;
  p.inner = cfg.inner;
  p.outer = cfg.outer;
  p.samples = cfg.samples;
  p.seed = cfg.seed;
  return p;
}

template <typename Ctx, typename G>
Json pws_report(const RunConfig& cfg, const Ctx& ctx, const G& names, Json group, const std::string& spec,
                const Coloring& c) {
  Json rep = header(cfg, std::move(group), spec);
  rep["params"] = Json{{"inner", pws_params_json(cfg.inner)}, {"outer", pws_params_json(cfg.outer)},
                       {"samples", cfg.samples}, {"witness_radius", cfg.witness_radius},
                       {"full_base_limit", kFullBaseLimit}};
  rep["coloring"] = coloring_json(c);
  std::optional<Failure> failure;
  if (cfg.command == "pws check" || cfg.command == "pws pigeonhole") {
    const auto a = make_set(names, ctx.size(), cfg.set, c, cfg.seed, "class:0");
    rep["set"] = set_json(ctx, a);
    if (cfg.command == "pws check") rep["result"] = pws_check_payload(ctx, a, cfg.inner);
    else rep["result"] = pws_pigeonhole_payload(ctx, a, cfg.inner, failure);
  } else {
    rep["result"] = pws_focus_payload(ctx, c, focus_params(cfg), failure);
  }
  set_status(rep, failure);
  return rep;
}

}  // namespace commands

// ---------------------------------------------------------------------------
// Entry points

/// Runs one command; exceptions propagate (exit code 1 at the CLI).
inline RunOutput run(const RunConfig& cfg) {
  using namespace cli_detail;
  RunOutput out;
  const std::string& cmd = cfg.command;
  if (cmd == "pattern-words") {
    out.report = commands::pattern_words_report(cfg);
  } else if (cmd.rfind("pws ", 0) == 0 && is_ball_spec(cfg.group)) {
    const auto [rank, radius] = parse_ball_spec(cfg.group);
    FreeGroupBall ball(rank, radius, cfg.guard_margin);
    BallContext ctx(ball, cfg.witness_radius);
    const RunConfig& local = cfg;
    const auto c = make_coloring(local, ball.size(), nullptr, &ball);
    Json group{{"spec", cfg.group}, {"order", ball.size()}, {"ball", ball_json(ball, cfg.guard_margin)}};
    out.report = commands::pws_report(local, ctx, ball, std::move(group), cfg.group, c);
  } else {
    if (is_ball_spec(cfg.group)) throw InvalidInput("free group balls are only supported by the pws commands");
    const std::string spec = cmd == "group check" ? (cfg.table.empty() ? cfg.group : "file:" + cfg.table) : cfg.group;
    const FiniteGroup g = build_group(spec, cfg.order_cap);
    if (cmd == "group gen" || cmd == "group check") {
      out.report = commands::group_report(cfg, g);
    } else {
      const auto c = make_coloring(cfg, g.order(), &g, nullptr);
      if (cmd == "color random" || cmd == "color load") out.report = commands::color_report(cfg, g, c);
      else if (cmd == "search") out.report = commands::search_report(cfg, g, c);
      else if (cmd == "many") out.report = commands::many_report(cfg, g, c);
      else if (cmd == "fp-count") out.report = commands::fp_count_report(cfg, g, c);
      else if (cmd == "mixing") out.report = commands::mixing_report(cfg, g, c);
      else if (cmd == "recurrence") out.report = commands::recurrence_report(cfg, g, c);
      else if (cmd == "pigeonhole") out.report = commands::pigeonhole_report(cfg, g, c);
      else if (cmd == "switch-tree") out.report = commands::switch_tree_report(cfg, g, c);
      else if (cmd == "focus") out.report = commands::focus_report(cfg, g, c);
      else if (cmd.rfind("pws ", 0) == 0) {
        FiniteContext ctx(g);
        out.report = commands::pws_report(cfg, ctx, g, group_json(g), g.spec(), c);
      } else {
        throw InvalidInput("unknown command '" + cmd + "'");
      }
    }
  }
  out.exit_code = exit_code_for(out.report);
  return out;
}

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> problems;
  void fail(std::string why) {
    ok = false;
    problems.push_back(std::move(why));
  }
};

namespace verify_detail {

using namespace cli_detail;

inline void check_instances(const FiniteGroup& g, const Coloring& c, const Json& list, int k, bool noncommuting,
                            VerifyResult& v) {
  std::size_t i = 0;
  for (const auto& j : list) {
    const auto inst = instance_from(g, j);
    if (inst.assignment.empty() || c(inst.assignment[0]) != inst.color)
      v.fail("instance " + std::to_string(i) + " has the wrong color");
    else if (!validate_instance(g, c, inst, k, noncommuting))
      v.fail("instance " + std::to_string(i) + " does not revalidate");
    ++i;
  }
}

inline void expect_equal(const Json& have, const Json& want, const std::string& what, VerifyResult& v) {
  if (have != want) v.fail(what + " does not match a fresh computation");
}

template <typename Ctx>
void verify_pws(const Json& rep, const Ctx& ctx, const Coloring& c, VerifyResult& v) {
  const auto& params = rep.at("params");
  const PwsParams inner = pws_params_from(params.at("inner"), 0);
  const PwsParams outer = pws_params_from(params.at("outer"), 0);
  const std::string cmd = rep.at("command");
  const auto& res = rep.at("result");
  if (cmd == "pws check") {
    const auto a = set_from(ctx, rep.at("set"));
    expect_equal(res, commands::pws_check_payload(ctx, a, inner), "pws check result", v);
    if (res.at("syndetic").at("holds").get<bool>() &&
        !covers(ctx, a, elements_from(ctx, res.at("syndetic").at("witness"))))
      v.fail("syndeticity witness does not cover");
    if (res.at("pws").at("holds").get<bool>()) {
      const auto f = elements_from(ctx, res.at("pws").at("witness"));
      if (f.size() > inner.sigma || !is_right_thick(ctx, preimage_union(ctx, f, a), inner.phi).thick)
        v.fail("pws witness does not give a thick set");
    }
    return;
  }
  if (cmd == "pws pigeonhole") {
    if (rep.at("status") != "ok") return;
    const auto a = set_from(ctx, rep.at("set"));
    const auto returned = set_from(ctx, res.at("returned"));
    const auto f = elements_from(ctx, res.at("syndetic_witness"));
    const auto fa = elements_from(ctx, res.at("a_witness"));
    if (!returned.contains(ctx.identity())) v.fail("identity missing from the returned set");
    if (!covers(ctx, returned, f)) v.fail("returned witness does not cover");
    if (f.size() > inner.sigma * fa.size()) v.fail("returned witness too large");
    if (!is_right_thick(ctx, preimage_union(ctx, fa, a), inner.phi).thick) v.fail("A's pws witness is not thick");
    const auto member = pigeonhole_member_params(inner, fa.size());
    expect_equal(res.at("member_params"), pws_params_json(member), "member parameters", v);
    ElementSet fresh(ctx.size());
    ctx.guard().for_each([&](Element g) {
      if (is_piecewise_syndetic(ctx, self_shift(ctx, a, g), member)) fresh.insert(g);
    });
    if (fresh != returned) v.fail("returned set does not match a fresh computation");
    return;
  }
  // pws focus
  PwsFocusResult fr;
  const auto& st = res.at("state");
  for (const auto& s : st.at("a")) fr.a.push_back(set_from(ctx, s));
  fr.y = elements_from(ctx, st.at("y"));
  fr.colors = st.at("colors").get<std::vector<Color>>();
  if (rep.at("status") == "ok") {
    fr.color = res.at("repeat").at("color").get<Color>();
    for (const auto& p : res.at("samples")) fr.samples.emplace_back(element_from(ctx, p.at(0)), element_from(ctx, p.at(1)));
    const auto yset = set_from(ctx, res.at("y_set"));
    const auto xset = set_from(ctx, res.at("x_set"));
    if (!res.at("y_set_witness").is_null() &&
        !is_right_thick(ctx, preimage_union(ctx, elements_from(ctx, res.at("y_set_witness")), yset), outer.phi).thick)
      v.fail("y-set pws evidence does not hold");
    if (!res.at("x_set_witness").is_null() &&
        !is_right_thick(ctx, preimage_union(ctx, elements_from(ctx, res.at("x_set_witness")), xset), inner.phi).thick)
      v.fail("x-set pws evidence does not hold");
    for (auto [x, y] : fr.samples)
      if (!yset.contains(y)) v.fail("sample y outside the y-set");
  } else {
    fr.failure = Failure{};
  }
  std::string why;
  if (!verify_pws_focusing(ctx, c, fr, &why)) v.fail(why);
}

}  // namespace verify_detail

/// Re-checks a report against freshly built objects.
inline VerifyResult verify_report(const Json& rep) {
  using namespace verify_detail;
  VerifyResult v;
  try {
    if (!rep.is_object() || rep.value("schema", "") != std::string(kReportSchema)) {
      v.fail("not an ncschur report");
      return v;
    }
    const std::string cmd = rep.at("command");
    if (cmd == "pattern-words") {
      RunConfig cfg;
      cfg.command = cmd;
      cfg.k = rep.at("params").at("k").get<int>();
      const auto fresh = commands::pattern_words_report(cfg);
      expect_equal(rep.at("words"), fresh.at("words"), "word list", v);
      expect_equal(rep.at("missing"), fresh.at("missing"), "missing list", v);
      return v;
    }
    const std::string spec = rep.at("spec");
    if (rep.at("group").at("spec") != spec) v.fail("group spec and report spec disagree");
    const std::size_t order = rep.at("group").at("order").get<std::size_t>();

    if (is_ball_spec(spec)) {
      const auto [rank, radius] = parse_ball_spec(spec);
      const auto& bj = rep.at("group").at("ball");
      const std::size_t margin = bj.at("guard_margin").get<std::size_t>();
      FreeGroupBall ball(rank, radius, margin);
      if (ball.size() != order) {
        v.fail("ball size differs from the recorded order");
        return v;
      }
      if (bj.at("words") != ball_json(ball, margin).at("words")) v.fail("ball word list differs");
      BallContext ctx(ball, rep.at("params").at("witness_radius").get<std::size_t>());
      const auto c = coloring_from(rep.at("coloring"), ball.size());
      verify_pws(rep, ctx, c, v);
      return v;
    }

    const FiniteGroup g = build_group(spec, std::max<std::uint64_t>(order, 1));
    if (g.order() != order) {
      v.fail("group order differs from the recorded order");
      return v;
    }
    if (cmd == "group gen" || cmd == "group check") {
      if (rep.at("elements") != Json(g.names())) v.fail("element names differ");
      if (rep.at("group").at("abelian").get<bool>() != g.is_abelian()) v.fail("abelian flag differs");
      return v;
    }
    const auto c = coloring_from(rep.at("coloring"), g.order());
    const auto& params = rep.contains("params") ? rep.at("params") : Json::object();
    if (cmd == "color random" || cmd == "color load") {
      if (params.at("source") == "random") {
        const Coloring fresh(random_colors(g.order(), c.num_colors(), rep.at("seed").get<std::uint64_t>()), c.num_colors());
        if (!(fresh == c)) v.fail("random coloring does not regenerate from its seed");
      }
      Json dens = Json::array();
      for (const auto& cls : c.classes()) dens.push_back(rational_json(density(cls)));
      expect_equal(rep.at("densities"), dens, "class densities", v);
      return v;
    }
    if (cmd == "search") {
      const int k = params.at("k").get<int>();
      const bool nc = params.at("noncommuting").get<bool>();
      check_instances(g, c, rep.at("instances"), k, nc, v);
      const auto observed = rational_from(rep.at("observed"));
      if (rep.at("exhaustive").get<bool>()) {
        SearchOptions o;
        o.k = k;
        o.noncommuting = nc;
        if (Rational(BigInt(count_pattern_instances(g, c, o))) != observed) v.fail("instance count differs");
      }
      if (Rational(BigInt(rep.at("instances").size())) > observed) v.fail("more instances than the observed count");
      if (rational_from(rep.at("expected")) != independent_model(g.order(), k, c.num_colors())) v.fail("expected value differs");
      return v;
    }
    if (cmd == "many") {
      RunConfig cfg;
      cfg.command = cmd;
      cfg.k = params.at("k").get<int>();
      cfg.noncommuting = params.at("noncommuting").get<bool>();
      cfg.seed = rep.at("seed").get<std::uint64_t>();
      auto fresh = commands::many_report(cfg, g, c);
      for (const char* key : {"levels", "observed", "expected", "outer_density"}) expect_equal(rep.at(key), fresh.at(key), key, v);
      return v;
    }
    if (cmd == "fp-count") {
      const auto a = set_from(g, rep.at("set"));
      RunConfig cfg;
      cfg.k = params.at("k").get<int>();
      cfg.direction = params.at("direction").get<std::string>();
      cfg.fp_samples = params.at("samples").get<std::uint64_t>();
      cfg.force_sampling = params.at("force_sampling").get<bool>();
      cfg.seed = rep.at("seed").get<std::uint64_t>();
      expect_equal(rep.at("result"), commands::fp_json(fp_tuple_count(g, a, commands::fp_options(cfg, cfg.k, g.order()))),
                   "fp count", v);
      return v;
    }
    if (cmd == "mixing") {
      const auto m = mixing_statistic(g, set_from(g, rep.at("set")), set_from(g, rep.at("set_b")));
      expect_equal(rep.at("observed"), rational_json(Rational(BigInt(m.observed))), "observed", v);
      expect_equal(rep.at("expected"), rational_json(m.expected), "expected", v);
      expect_equal(rep.at("relative_deviation"), rational_json(m.relative_deviation), "relative deviation", v);
      return v;
    }
    if (cmd == "recurrence") {
      RecurrenceOptions o;
      o.side = parse_side(params.at("side"));
      o.kind = parse_kind(params.at("kind"));
      o.delta = rational_from(params.at("delta"));
      o.large = params.at("large").get<bool>();
      if (!params.at("theta").is_null()) o.theta = rational_from(params.at("theta"));
      o.max_order = 24;
      const auto r = classify_recurrence(g, set_from(g, rep.at("set")), o);
      if (r.holds != rep.at("holds").get<bool>()) v.fail("recurrence verdict differs");
      if (!r.holds && rep.at("counterexample") != set_json(g, *r.counterexample)) v.fail("counterexample differs");
      return v;
    }
    if (cmd == "pigeonhole") {
      if (rep.at("status") != "ok") return v;
      const auto a = set_from(g, rep.at("set"));
      const auto& res = rep.at("result");
      if (!params.at("iterated").get<bool>()) {
        const auto ys = elements_from(g, rep.at("ys"));
        const auto i = res.at("i").get<std::size_t>(), j = res.at("j").get<std::size_t>();
        if (i > j || j >= ys.size()) {
          v.fail("pigeonhole indices out of range");
          return v;
        }
        Element y = g.identity();
        for (std::size_t t = i; t <= j; ++t) y = g.mul(y, ys[t]);
        if (g.name(y) != res.at("y")) v.fail("y is not the product y_i ... y_j");
        const auto w = shifted_intersection(g, a, y, parse_side(params.at("side")));
        if (set_json(g, w) != res.at("witness")) v.fail("witness set differs");
        const auto d = density(a);
        if (!(density(w) > d * d / 2)) v.fail("witness density does not beat the bound");
      } else {
        std::vector<std::vector<Element>> sprime;
        for (const auto& l : rep.at("lists")) sprime.push_back(elements_from(g, l));
        IteratedPigeonholeResult r;
        for (const auto& s : res.at("sets")) r.sets.push_back(elements_from(g, s));
        r.b = set_from(g, res.at("b"));
        r.b_density = rational_from(res.at("b_density"));
        r.bound = rational_from(res.at("bound"));
        if (density(r.b) != r.b_density || !(r.b_density > r.bound)) v.fail("B density does not beat the bound");
        for (std::size_t i = 0; i < r.sets.size(); ++i)
          for (Element s : fp_values(g, r.sets[i]))
            if (!translate(g, r.b, s, Side::Left).subset_of(a)) v.fail("s B leaves A");
      }
      return v;
    }
    if (cmd == "switch-tree") {
      if (rep.at("status") != "ok") return v;
      const auto cst = switching_tree_from(g, rep.at("tree"));
      std::string why;
      if (!verify_switching_tree(g, c, cst, c.classes(), params.at("n").get<std::size_t>(), &why)) v.fail(why);
      if (!set_from(g, rep.at("roots")).subset_of(set_from(g, rep.at("set")))) v.fail("roots outside A");
      return v;
    }
    if (cmd == "focus") {
      FocusResult fr;
      const auto& st = rep.at("state");
      fr.state.r = st.at("r").get<std::size_t>();
      fr.state.k = st.at("k").get<std::size_t>();
      fr.state.epsilon = rational_from(st.at("epsilon"));
      for (const auto& s : st.at("a")) fr.state.a.push_back(set_from(g, s));
      fr.state.y = elements_from(g, st.at("y"));
      fr.state.f = st.at("f").get<std::vector<Color>>();
      fr.mode = rep.at("mode");
      fr.steps = rep.at("steps").get<std::vector<std::size_t>>();
      fr.color = rep.at("color").get<Color>();
      fr.x = elements_from(g, rep.at("x"));
      fr.x0_set = set_from(g, rep.at("x0_set"));
      for (const auto& j : rep.at("instances")) fr.instances.push_back(instance_from(g, j));
      if (rep.at("status") != "ok") fr.failure = Failure{};
      std::string why;
      if (!verify_focusing(g, c, fr, &why)) v.fail(why);
      check_instances(g, c, rep.at("instances"), static_cast<int>(fr.state.k), params.at("noncommuting").get<bool>(), v);
      if (!rep.at("tree").is_null()) {
        const auto cst = switching_tree_from(g, rep.at("tree"));
        if (!verify_switching_tree(g, c, cst, c.classes(), params.at("n").get<std::size_t>(), &why)) v.fail(why);
      }
      return v;
    }
    if (cmd.rfind("pws ", 0) == 0) {
      FiniteContext ctx(g);
      verify_pws(rep, ctx, c, v);
      return v;
    }
    v.fail("unknown command '" + cmd + "'");
  } catch (const std::exception& e) {
    v.fail(std::string("schema mismatch: ") + e.what());
  }
  return v;
}

/// Instances or samples as CSV rows; other reports as key,value lines.
inline std::string report_csv(const Json& rep) {
  std::ostringstream out;
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  if (rep.contains("instances") && !rep.at("instances").empty()) {
    const auto& list = rep.at("instances");
    const auto width = list.at(0).at("assignment").size();
    for (std::size_t i = 0; i < width; ++i) out << "x" << i << ",";
    out << "color\n";
    for (const auto& inst : list) {
      for (const auto& x : inst.at("assignment")) out << cell(x.get<std::string>()) << ",";
      out << inst.at("color").get<Color>() << "\n";
    }
    return out.str();
  }
  if (rep.contains("result") && rep.at("result").is_object() && rep.at("result").contains("samples")) {
    out << "x,y\n";
    for (const auto& p : rep.at("result").at("samples"))
      out << cell(p.at(0).get<std::string>()) << "," << cell(p.at(1).get<std::string>()) << "\n";
    return out.str();
  }
  out << "key,value\n";
  for (const auto& [key, value] : rep.items())
    if (value.is_primitive()) out << key << "," << cell(value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  return out.str();
}

}  // namespace ncschur
