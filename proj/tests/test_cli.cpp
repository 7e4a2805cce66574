#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <set>

#include "ncschur/cli.hpp"

using namespace ncschur;

namespace {

RunConfig config(std::string command, std::string group) {
  RunConfig c;
  c.command = std::move(command);
  c.group = std::move(group);
  return c;
}

std::vector<RunConfig> sample_configs() {
  std::vector<RunConfig> out;
  auto add = [&](std::string cmd, std::string group, auto tweak) {
    auto c = config(std::move(cmd), std::move(group));
    tweak(c);
    out.push_back(std::move(c));
  };
  add("pattern-words", "", [](RunConfig& c) { c.k = 2; });
  add("group gen", "psl2:5", [](RunConfig&) {});
  add("color random", "sym:4", [](RunConfig& c) { c.colors = 3; c.seed = 5; });
  add("search", "sym:3", [](RunConfig& c) { c.colors = 1; c.noncommuting = true; });
  add("search", "dihedral:5", [](RunConfig& c) { c.seed = 2; });
  add("many", "sym:4", [](RunConfig&) {});
  add("fp-count", "psl2:5", [](RunConfig& c) { c.k = 2; });
  add("mixing", "cyclic:60", [](RunConfig& c) { c.coloring = "mod"; });
  add("recurrence", "cyclic:4", [](RunConfig& c) { c.set = "2"; });
  add("pigeonhole", "psl2:7", [](RunConfig& c) { c.seed = 3; });
  add("pigeonhole", "sym:4", [](RunConfig& c) { c.iterated = true; });
  add("switch-tree", "cyclic:8", [](RunConfig& c) { c.coloring = "mod"; });
  add("focus", "psl2:7", [](RunConfig& c) { c.noncommuting = true; });
  add("pws check", "cyclic:12", [](RunConfig& c) { c.coloring = "mod"; });
  add("pws pigeonhole", "cyclic:12", [](RunConfig& c) { c.coloring = "mod"; c.inner.sigma = c.inner.phi = 3; });
  add("pws focus", "cyclic:24", [](RunConfig& c) { c.coloring = "block:12"; c.inner.sigma = c.inner.phi = 3; c.outer = c.inner; });
  add("pws focus", "free:2:4", [](RunConfig& c) { c.coloring = "first-letter"; c.inner.sigma = c.inner.phi = 3; c.outer = c.inner; });
  return out;
}

std::pair<int, std::string> shell(const std::string& cmd) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((cmd + " 2>&1").c_str(), "r"), pclose);
  std::array<char, 4096> buf{};
  while (pipe && fgets(buf.data(), buf.size(), pipe.get())) out += buf.data();
  const int status = pclose(pipe.release());
  return {WEXITSTATUS(status), out};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ncschur-cli-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Run, SearchExample) {
  auto c = config("search", "sym:3");
  c.colors = 1;
  c.noncommuting = true;
  auto out = run(c);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_EQ(rational_from(out.report.at("observed")), 18);
  EXPECT_EQ(out.report.at("instances").size(), 18u);
  EXPECT_EQ(out.report.at("prng"), "xorshift64* seeded via splitmix64");
}

TEST(Run, PatternWordsExample) {
  auto c = config("pattern-words", "");
  c.k = 2;
  auto out = run(c);
  EXPECT_EQ(out.report.at("words").size(), 10u);
  const auto missing = out.report.at("missing").get<std::set<std::string>>();
  EXPECT_EQ(missing, (std::set<std::string>{"x0.x2", "x2.x1", "x0.x2.x1", "x1.x0.x2", "x2.x1.x0"}));
}

TEST(Run, RecurrenceExample) {
  auto c = config("recurrence", "cyclic:4");
  c.set = "2";
  auto out = run(c);
  EXPECT_FALSE(out.report.at("holds").get<bool>());
}

TEST(Run, RoundTripVerifies) {
  for (const auto& c : sample_configs()) {
    SCOPED_TRACE(c.command + " " + c.group);
    auto out = run(c);
    EXPECT_NE(out.exit_code, 1);
    auto v = verify_report(out.report);
    EXPECT_TRUE(v.ok) << (v.problems.empty() ? "" : v.problems.front());
  }
}

TEST(Run, Deterministic) {
  for (const auto& c : sample_configs()) EXPECT_EQ(run(c).report.dump(2), run(c).report.dump(2)) << c.command;
}

TEST(Run, SeedChangesRandomColoring) {
  auto a = config("color random", "sym:4"), b = a;
  b.seed = 1;
  EXPECT_NE(run(a).report.at("coloring"), run(b).report.at("coloring"));
}

TEST(Verify, CorruptedInstanceColor) {
  auto c = config("search", "sym:3");
  c.colors = 1;
  c.noncommuting = true;
  auto rep = run(c).report;
  rep["instances"][0]["color"] = 1;
  EXPECT_FALSE(verify_report(rep).ok);
}

TEST(Verify, CorruptedRealizedValue) {
  auto c = config("search", "dihedral:5");
  auto rep = run(c).report;
  ASSERT_FALSE(rep.at("instances").empty());
  auto& r = rep["instances"][0]["realized"][2]["value"];
  r = r.get<std::string>() == "r0" ? "r1" : "r0";
  EXPECT_FALSE(verify_report(rep).ok);
}

TEST(Verify, DifferentGroupSpec) {
  auto c = config("search", "sym:3");
  c.colors = 1;
  auto rep = run(c).report;
  rep["group"]["spec"] = "cyclic:6";
  EXPECT_FALSE(verify_report(rep).ok);
  rep = run(c).report;
  rep["spec"] = "cyclic:6";
  EXPECT_FALSE(verify_report(rep).ok);
  rep["group"]["spec"] = "cyclic:6";
  EXPECT_FALSE(verify_report(rep).ok);
}

TEST(Verify, TamperedPwsSample) {
  auto c = config("pws focus", "cyclic:24");
  c.coloring = "block:12";
  c.inner.sigma = c.inner.phi = 3;
  c.outer = c.inner;
  auto rep = run(c).report;
  ASSERT_FALSE(rep.at("result").at("samples").empty());
  rep["result"]["samples"][0] = Json{"11", "1"};
  EXPECT_FALSE(verify_report(rep).ok);
}

TEST(Verify, SchemaMismatch) {
  EXPECT_FALSE(verify_report(Json{{"schema", "other"}}).ok);
  EXPECT_FALSE(verify_report(Json::array()).ok);
  auto rep = run(config("group gen", "sym:3")).report;
  rep.erase("group");
  EXPECT_FALSE(verify_report(rep).ok);
}

TEST(Csv, InstancesAndKeyValue) {
  auto c = config("search", "sym:3");
  c.colors = 1;
  c.noncommuting = true;
  auto csv = report_csv(run(c).report);
  EXPECT_EQ(csv.rfind("x0,x1,color\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 19);
}

TEST(Binary, SearchAndVerify) {
  const auto path = scratch("search.json");
  auto [code, out] = shell(std::string(NCSCHUR_CLI_PATH) + " search --group sym:3 --colors 1 --k 1 --noncommuting --out " +
                           path.string());
  ASSERT_EQ(code, 0) << out;
  auto rep = read_json_file(path);
  EXPECT_EQ(rational_from(rep.at("observed")), 18);
  auto [vcode, vout] = shell(std::string(NCSCHUR_CLI_PATH) + " verify " + path.string());
  EXPECT_EQ(vcode, 0) << vout;

  rep["instances"][0]["color"] = 1;
  const auto bad = scratch("search-bad.json");
  write_atomic(bad, rep.dump());
  EXPECT_NE(shell(std::string(NCSCHUR_CLI_PATH) + " verify " + bad.string()).first, 0);
}

TEST(Binary, PatternWordsAndRecurrence) {
  auto [code, out] = shell(std::string(NCSCHUR_CLI_PATH) + " pattern-words --k 2");
  ASSERT_EQ(code, 0) << out;
  auto rep = Json::parse(out);
  EXPECT_EQ(rep.at("words").size(), 10u);
  EXPECT_EQ(rep.at("missing").size(), 5u);

  auto [rcode, rout] = shell(std::string(NCSCHUR_CLI_PATH) + " recurrence --group cyclic:4 --set 2 --kind weak --side left");
  ASSERT_EQ(rcode, 0) << rout;
  EXPECT_FALSE(Json::parse(rout).at("holds").get<bool>());
}

TEST(Binary, SeedRangeWritesOneReportPerSeed) {
  const auto dir = scratch("seeds");
  std::filesystem::remove_all(dir);
  auto [code, out] = shell(std::string(NCSCHUR_CLI_PATH) + " focus --group sym:4 --seeds 1:3 --jobs 2 --out-dir " + dir.string());
  EXPECT_NE(code, 1) << out;
  for (int s = 1; s <= 3; ++s) {
    const auto f = dir / ("focus-" + std::to_string(s) + ".json");
    ASSERT_TRUE(std::filesystem::exists(f)) << f;
    EXPECT_EQ(read_json_file(f).at("seed").get<int>(), s);
    EXPECT_EQ(shell(std::string(NCSCHUR_CLI_PATH) + " verify " + f.string()).first, 0);
  }
}

TEST(Binary, BadInputExitsOne) {
  EXPECT_EQ(shell(std::string(NCSCHUR_CLI_PATH) + " search --group bogus:3").first, 1);
  EXPECT_EQ(shell(std::string(NCSCHUR_CLI_PATH) + " verify /nonexistent/report.json").first, 1);
}
