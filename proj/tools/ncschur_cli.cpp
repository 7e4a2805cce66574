// Command-line front end for the ncschur engine.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "ncschur/cli.hpp"

namespace {

using ncschur::RunConfig;

struct Output {
  std::string out;
  std::string out_dir;
  std::string csv;
  std::string seeds;
  unsigned jobs = 1;
  bool json = true;
  std::string table_out;
  std::string text_out;
};

void add_common(CLI::App* app, RunConfig& cfg, Output& o, bool colored = true) {
  app->add_option("--group,-g", cfg.group, "Group spec: cyclic:n, dihedral:n, sym:n, psl2:p, products with *, file:PATH");
  app->add_option("--order-cap", cfg.order_cap, "Refuse groups larger than this");
  app->add_option("--seed", cfg.seed, "PRNG seed (xorshift64*, seeded through splitmix64)");
  app->add_option("--seeds", o.seeds, "Seed range A:B (inclusive); one report per seed in --out-dir");
  app->add_option("--jobs,-j", o.jobs, "Parallel runs for --seeds");
  app->add_option("--out,-o", o.out, "Write the report here (atomically) instead of stdout");
  app->add_option("--out-dir", o.out_dir, "Directory for per-seed reports");
  app->add_option("--csv", o.csv, "Also write instances or samples as CSV");
  app->add_flag("--json", o.json, "JSON output (default)");
  app->add_option("--budget", cfg.budget, "Work budget; defaults to $NCSCHUR_BUDGET or 1e9");
  if (colored) {
    app->add_option("--coloring", cfg.coloring, "random | constant | mod | block:B | file:PATH | first-letter");
    app->add_option("--colors", cfg.colors, "Number of colors r+1");
  }
}

void add_set(CLI::App* app, RunConfig& cfg) {
  app->add_option("--set", cfg.set, "Names (comma separated), all, none, class:i, complement:i or random:N");
}

void add_pws(CLI::App* app, RunConfig& cfg) {
  app->add_option("--sigma", cfg.inner.sigma, "Max syndeticity witness size");
  app->add_option("--phi", cfg.inner.phi, "Max thickness test set size");
  app->add_option("--sigma-out", cfg.outer.sigma, "Outer sigma (focus)");
  app->add_option("--phi-out", cfg.outer.phi, "Outer phi (focus)");
  app->add_option("--samples", cfg.samples, "Revalidated (x, y) samples kept (focus)");
  app->add_option("--witness-radius", cfg.witness_radius, "Witness candidates in a free group ball");
  app->add_option("--guard-margin", cfg.guard_margin, "Guard region is radius minus this");
}

int emit(const RunConfig& cfg, const Output& o, const std::string& path) {
  auto res = ncschur::run(cfg);
  const auto text = res.report.dump(2) + "\n";
  if (path.empty()) std::cout << text;
  else ncschur::write_atomic(path, text);
  if (!o.csv.empty()) {
    auto csv = o.csv;
    if (!path.empty() && !o.seeds.empty()) csv = path + ".csv";
    ncschur::write_atomic(csv, ncschur::report_csv(res.report));
  }
  return res.exit_code;
}

int run_config(RunConfig cfg, const Output& o) {
  if (cfg.command == "color load" && cfg.coloring.rfind("file:", 0) != 0)
    throw ncschur::InvalidInput("color load needs --file");
  if (cfg.command == "group gen" && !o.table_out.empty()) {
    const auto g = ncschur::build_group(cfg.group, cfg.order_cap);
    std::ostringstream t;
    ncschur::write_table(t, g);
    ncschur::write_atomic(o.table_out, t.str());
  }
  if (!o.text_out.empty()) {
    const auto g = ncschur::build_group(cfg.group, cfg.order_cap);
    std::ostringstream t;
    ncschur::write_coloring(t, g, ncschur::cli_detail::make_coloring(cfg, g.order(), &g, nullptr));
    ncschur::write_atomic(o.text_out, t.str());
  }
  if (o.seeds.empty()) return emit(cfg, o, o.out);

  const auto colon = o.seeds.find(':');
  if (colon == std::string::npos) throw ncschur::InvalidInput("--seeds is A:B");
  const auto lo = ncschur::detail::parse_uint(o.seeds.substr(0, colon), "seed");
  const auto hi = ncschur::detail::parse_uint(o.seeds.substr(colon + 1), "seed");
  if (hi < lo) throw ncschur::InvalidInput("--seeds range is empty");
  if (o.out_dir.empty()) throw ncschur::InvalidInput("--seeds needs --out-dir");
  std::filesystem::create_directories(o.out_dir);
  std::string stem = cfg.command;
  for (auto& ch : stem)
    if (ch == ' ') ch = '-';
  std::mutex mu;
  int worst = 0;
  std::uint64_t next = lo;
  auto worker = [&] {
    while (true) {
      std::uint64_t seed;
      {
        std::lock_guard lock(mu);
        if (next > hi) return;
        seed = next++;
      }
      RunConfig local = cfg;
      local.seed = seed;
      const auto path = (std::filesystem::path(o.out_dir) / (stem + "-" + std::to_string(seed) + ".json")).string();
      int code = 1;
      try {
        code = emit(local, o, path);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        std::cerr << "seed " << seed << ": " << e.what() << "\n";
      }
      std::lock_guard lock(mu);
      if (code == 1 || (code == 2 && worst == 0)) worst = code;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::max(1U, o.jobs); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-group engine for the pattern {x, y, xy, yx} and its k-variable version"};
  app.require_subcommand(1);
  RunConfig cfg;
  Output o;
  std::string verify_path;

  auto* group = app.add_subcommand("group", "Build or check a group");
  group->require_subcommand(1);
  auto* group_gen = group->add_subcommand("gen", "Build a group from a spec");
  add_common(group_gen, cfg, o, false);
  group_gen->add_option("--table-out", o.table_out, "Write the Cayley table");
  auto* group_check = group->add_subcommand("check", "Validate a Cayley table file or spec");
  add_common(group_check, cfg, o, false);
  group_check->add_option("--table", cfg.table, "Cayley table file");

  auto* color = app.add_subcommand("color", "Generate or load a coloring");
  color->require_subcommand(1);
  auto* color_random = color->add_subcommand("random", "Seeded random coloring");
  add_common(color_random, cfg, o);
  color_random->add_option("--text-out", o.text_out, "Write the coloring in text form");
  auto* color_load = color->add_subcommand("load", "Load a coloring file");
  add_common(color_load, cfg, o);
  std::string color_file;
  color_load->add_option("--file", color_file, "Coloring file ('colors n' then 'name color' lines)")->required();

  auto* words = app.add_subcommand("pattern-words", "List the pattern words for k");
  words->add_option("--k", cfg.k, "Number of extra variables");
  words->add_option("--out,-o", o.out, "Write the report here");

  auto* search = app.add_subcommand("search", "Find monochromatic pattern instances");
  auto* many = app.add_subcommand("many", "Nested 'many' statistic");
  for (auto* sub : {search, many}) {
    add_common(sub, cfg, o);
    sub->add_option("--k", cfg.k, "Number of extra variables");
    sub->add_flag("--noncommuting", cfg.noncommuting, "Require pairwise non-commuting variables");
    sub->add_option("--threads", cfg.threads, "Counting threads");
  }
  search->add_option("--limit", cfg.limit, "Instances kept in the report (0 = all)");

  auto* fp = app.add_subcommand("fp-count", "Count finite-product tuples inside a set");
  add_common(fp, cfg, o);
  add_set(fp, cfg);
  fp->add_option("--k", cfg.k, "Tuple length minus one");
  fp->add_option("--direction", cfg.direction, "forward | backward");
  fp->add_option("--samples", cfg.fp_samples, "Samples when counting is out of budget");
  fp->add_flag("--sample", cfg.force_sampling, "Always sample");

  auto* mixing = app.add_subcommand("mixing", "Count (a, b) in A x B with ab in A");
  add_common(mixing, cfg, o);
  add_set(mixing, cfg);
  mixing->add_option("--set-b", cfg.set_b, "Second set (defaults to A)");

  auto* rec = app.add_subcommand("recurrence", "Classify a set of recurrence exhaustively");
  add_common(rec, cfg, o);
  add_set(rec, cfg);
  rec->add_option("--kind", cfg.kind, "weak | plain | nice");
  rec->add_option("--side", cfg.side, "left | right");
  rec->add_option("--delta", cfg.delta, "Tolerance for nice recurrence, e.g. 1/2");
  rec->add_flag("--large", cfg.large, "Require many good shifts");
  rec->add_option("--theta", cfg.theta, "Fraction of good shifts with --large");

  auto* php = app.add_subcommand("pigeonhole", "Density pigeonhole");
  add_common(php, cfg, o);
  add_set(php, cfg);
  php->add_option("--ys", cfg.ys, "Shift list (names); default is seeded");
  php->add_option("--side", cfg.side, "left | right");
  php->add_flag("--iterated", cfg.iterated, "Iterated version over seeded lists");
  php->add_option("--k", cfg.k, "Set size for --iterated");
  php->add_option("--lists", cfg.lists, "Number of lists for --iterated");
  php->add_option("--length", cfg.length, "List length");

  auto* sw = app.add_subcommand("switch-tree", "Build a color switching tree over the color classes");
  add_common(sw, cfg, o);
  add_set(sw, cfg);
  sw->add_option("--m", cfg.m, "Height");
  sw->add_option("--n", cfg.n, "Generators per set S_i");
  sw->add_flag("--rootless", cfg.rootless, "Omit the root condition");

  auto* focus = app.add_subcommand("focus", "Color focusing construction");
  add_common(focus, cfg, o);
  focus->add_option("--k", cfg.k, "Number of extra variables");
  focus->add_flag("--noncommuting", cfg.noncommuting, "Require pairwise non-commuting variables");
  focus->add_option("--n", cfg.n, "Switching tree branching");
  focus->add_flag("!--no-tree", cfg.use_tree, "Skip the switching tree");
  focus->add_option("--limit", cfg.limit, "Instances kept (0 = all)");

  auto* pws = app.add_subcommand("pws", "Piecewise syndetic predicates; groups or free:RANK:RADIUS balls");
  pws->require_subcommand(1);
  auto* pws_check = pws->add_subcommand("check", "Thick, syndetic and pws tests for a set");
  auto* pws_php = pws->add_subcommand("pigeonhole", "{g : g^-1 A ∩ A pws} and its syndeticity witness");
  auto* pws_focus = pws->add_subcommand("focus", "Monochromatic {x, xy, yx} by color focusing");
  for (auto* sub : {pws_check, pws_php, pws_focus}) {
    add_common(sub, cfg, o);
    add_pws(sub, cfg);
  }
  add_set(pws_check, cfg);
  add_set(pws_php, cfg);

  auto* verify = app.add_subcommand("verify", "Re-check a report");
  verify->add_option("report", verify_path, "Report file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      const auto rep = ncschur::read_json_file(verify_path);
      const auto v = ncschur::verify_report(rep);
      for (const auto& p : v.problems) std::cerr << "verify: " << p << "\n";
      std::cout << (v.ok ? "ok" : "FAILED") << "\n";
      return v.ok ? 0 : 1;
    }
    for (auto* sub : app.get_subcommands()) {
      cfg.command = sub->get_name();
      for (auto* leaf : sub->get_subcommands()) cfg.command += " " + leaf->get_name();
    }
    if (*color_load) cfg.coloring = "file:" + color_file;
    if (*pws && cfg.group.rfind("free:", 0) == 0 && cfg.coloring == "random" && !pws_check->count("--coloring") &&
        !pws_php->count("--coloring") && !pws_focus->count("--coloring"))
      cfg.coloring = "first-letter";
    if (!pws_focus->count("--sigma-out")) cfg.outer.sigma = cfg.inner.sigma;
    if (!pws_focus->count("--phi-out")) cfg.outer.phi = cfg.inner.phi;
    return run_config(cfg, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
