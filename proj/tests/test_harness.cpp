#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"

#include "focklab/config.hpp"
#include "focklab/report.hpp"
#include "focklab/suites.hpp"
#include "focklab/version.hpp"
#include "focklab/weights.hpp"

using namespace focklab;

namespace {

std::filesystem::path temp_dir(const char* tag) {
  std::filesystem::path p = std::filesystem::temp_directory_path() /
                            (std::string("focklab-") + tag + "-" +
                             std::to_string(::getpid()));
  std::filesystem::create_directories(p);
  return p;
}

// Drop the wallTimeMs lines, the only nondeterministic part of a report.
std::string strip_wall_time(const std::string& json) {
  std::istringstream in(json);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("\"wallTimeMs\"") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config file round trip with comments and whitespace") {
  const std::filesystem::path dir = temp_dir("cfg");
  const std::filesystem::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "# run parameters\n"
        << "\n"
        << "seed = 99\n"
        << "  qx.window_tol= 0.04\n"
        << "cache_dir = /tmp/cache\n"
        << "verbose = yes\n"
        << "grid = 1, 2.5 ,10\n";
  }
  const Config cfg = Config::from_file(file);
  CHECK(cfg.has("seed"));
  CHECK_FALSE(cfg.has("missing"));
  CHECK(cfg.get_int("seed", 0) == 99);
  CHECK(cfg.get_double("qx.window_tol", 0.0) == doctest::Approx(0.04));
  CHECK(cfg.get("cache_dir", "") == "/tmp/cache");
  CHECK(cfg.get_bool("verbose", false));
  const std::vector<double> grid = cfg.get_list("grid", {});
  REQUIRE(grid.size() == 3);
  CHECK(grid[1] == doctest::Approx(2.5));
  CHECK(cfg.keys().size() == 5);

  // Fallbacks apply only when the key is absent.
  CHECK(cfg.get_int("other", 7) == 7);
  CHECK(cfg.get_list("other", {1.0}).size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config rejects malformed input loudly") {
  const std::filesystem::path dir = temp_dir("badcfg");
  const std::filesystem::path file = dir / "bad.cfg";
  {
    std::ofstream out(file);
    out << "good = 1\n"
        << "no equals sign here\n";
  }
  CHECK_THROWS_WITH_AS(Config::from_file(file),
                       doctest::Contains(":2:"), std::runtime_error);
  CHECK_THROWS_AS(Config::from_file(dir / "absent.cfg"), std::runtime_error);

  Config cfg;
  cfg.set("n", "12x");
  cfg.set("t", "1.5y");
  cfg.set("b", "maybe");
  cfg.set("l", "1,zz");
  CHECK_THROWS_WITH_AS(cfg.get_int("n", 0), doctest::Contains("n"),
                       std::runtime_error);
  CHECK_THROWS_AS(cfg.get_double("t", 0.0), std::runtime_error);
  CHECK_THROWS_AS(cfg.get_bool("b", false), std::runtime_error);
  CHECK_THROWS_AS(cfg.get_list("l", {}), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bool synonyms") {
  Config cfg;
  for (const char* v : {"true", "1", "on", "yes"}) {
    cfg.set("k", v);
    CHECK(cfg.get_bool("k", false));
  }
  for (const char* v : {"false", "0", "off", "no"}) {
    cfg.set("k", v);
    CHECK_FALSE(cfg.get_bool("k", true));
  }
}

TEST_CASE("numeric cases pass by tolerance and fail on NaN") {
  CHECK(numeric_case("a", 1, "", 1.0005, 1.0, 1e-3).pass);
  CHECK_FALSE(numeric_case("a", 1, "", 1.002, 1.0, 1e-3).pass);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(numeric_case("a", 1, "", nan, 1.0, 1e9).pass);
  CHECK_FALSE(numeric_case("a", 1, "",
                           std::numeric_limits<double>::infinity(), 1.0, 1e9)
                  .pass);

  const CaseResult v = verdict_case("v", 0, "", true, "note");
  CHECK(v.pass);
  CHECK(std::isnan(v.measured));

  SuiteReport rep;
  rep.suite = "s";
  rep.cases.push_back(numeric_case("ok", 0, "", 0.0, 0.0, 1.0));
  CHECK(rep.pass());
  rep.cases.push_back(verdict_case("bad", 0, "", false, ""));
  CHECK_FALSE(rep.pass());

  // Verdict NaNs serialize as JSON null.
  rep.cases.pop_back();
  rep.cases.push_back(verdict_case("v", 0, "", true, ""));
  const std::string json = render_suite_json(rep);
  CHECK(json.find("\"measured\": null") != std::string::npos);
}

TEST_CASE("suite catalog is fixed and fully anchored") {
  const std::vector<std::string> expected = {
      "kernel-classical", "laplace",    "theorem-b", "offdiag",
      "qx",               "lattice",    "hankel-exact",
      "schatten-threshold", "mo-bloch", "carleson",  "trace",
      "besov"};
  CHECK(suite_catalog() == expected);
  for (const std::string& s : suite_catalog())
    CHECK_FALSE(suite_anchor(s).empty());
  CHECK_THROWS_AS((void)suite_anchor("nope"), std::invalid_argument);
}

TEST_CASE("suite runs are deterministic given seed and config") {
  Config cfg;
  cfg.set("seed", "4242");
  const SuiteReport a = run_suite("qx", cfg);
  const SuiteReport b = run_suite("qx", cfg);
  CHECK(a.suite == "qx");
  CHECK(a.seed == 4242);
  CHECK_FALSE(a.anchor.empty());
  CHECK(a.cases.size() >= 4);
  CHECK(strip_wall_time(render_suite_json(a)) ==
        strip_wall_time(render_suite_json(b)));

  CHECK_THROWS_AS((void)run_suite("nope", cfg), std::invalid_argument);
  CHECK_THROWS_AS((void)run_suites({"qx", "nope"}, cfg),
                  std::invalid_argument);

  const std::vector<SuiteReport> both = run_suites({"qx", "qx"}, cfg);
  REQUIRE(both.size() == 2);
  CHECK(strip_wall_time(render_suite_json(both[0])) ==
        strip_wall_time(render_suite_json(both[1])));
}

TEST_CASE("summary json carries tool identity and catalog hash") {
  Config cfg;
  const std::vector<SuiteReport> reports = run_suites({"qx"}, cfg);
  const std::string json = render_summary_json(reports);
  CHECK(json.find("\"tool\": \"focklab\"") != std::string::npos);
  CHECK(json.find(kVersion) != std::string::npos);
  CHECK(json.find(catalog_hash()) != std::string::npos);
  CHECK(json.find(suite_anchor("qx")) != std::string::npos);
}

TEST_CASE("emit_report writes summary json plus per-suite csv") {
  const std::filesystem::path dir = temp_dir("emit");
  Config cfg;
  const std::vector<SuiteReport> reports = run_suites({"qx"}, cfg);
  const auto paths = emit_report(reports, dir / "run");
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].filename() == "run.json");
  CHECK(paths[1].filename() == "run-qx.csv");
  for (const auto& p : paths) {
    CHECK(std::filesystem::exists(p));
    CHECK(std::filesystem::file_size(p) > 0);
  }
  {
    std::ifstream in(paths[1]);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "suite,anchor,case,criterion,inputs,measured,expected,tolerance,"
          "pass,note");
  }
  CHECK_THROWS_AS((void)emit_report({}, dir / "none"), std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv escapes commas and quotes") {
  SuiteReport rep;
  rep.suite = "demo";
  rep.anchor = "anchor, with comma";
  rep.cases.push_back(
      numeric_case("case", 0, "a=1, b=\"two\"", 1.0, 1.0, 0.1));
  const std::string csv = render_suite_csv(rep);
  CHECK(csv.find("\"anchor, with comma\"") != std::string::npos);
  CHECK(csv.find("\"a=1, b=\"\"two\"\"\"") != std::string::npos);
  // Unescaped fields stay bare.
  CHECK(csv.find("demo,") == csv.find("demo"));
}

}  // TEST_SUITE
