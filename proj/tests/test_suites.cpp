#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/parallel.hpp"
#include "carnot/suites.hpp"

using namespace carnot;

namespace {

SuiteConfig config(const std::string& suite, const std::string& group = "") {
  SuiteConfig c;
  c.suite = suite;
  c.group = group;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("every listed suite has a default group") {
  const auto& cat = suite_catalog();
  CHECK(cat.size() == 9u);
  for (const auto& s : cat) {
    CHECK_FALSE(s.default_group.empty());
    CHECK_FALSE(s.description.empty());
  }
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(run_suite(config("nonesuch")), UsageError);
  CHECK_THROWS_AS(run_suite(config("group-axioms", "nonesuch")), UsageError);
  SuiteConfig c = config("group-axioms", "heisenberg1");
  c.params["bogus"] = "1";
  CHECK_THROWS_AS(run_suite(c), UsageError);
  SuiteConfig d = config("drift", "euclidean2");
  CHECK_THROWS_AS(run_suite(d), UsageError);
  SuiteConfig e = config("drift", "heisenberg1");
  e.params["sigmas"] = "0.1,abc";
  CHECK_THROWS_AS(run_suite(e), UsageError);
}

TEST_CASE("small runs pass") {
  SuiteConfig a = config("group-axioms", "engel");
  a.samples = 500;
  const SuiteResult ra = run_suite(a);
  CHECK(ra.passed());
  CHECK(ra.first_failure() == nullptr);
  CHECK_FALSE(ra.tables.empty());

  SuiteConfig d = config("decompose-roundtrip", "heisenberg1");
  d.samples = 50;
  CHECK(run_suite(d).passed());

  SuiteConfig t = config("tiling-verify", "euclidean1");
  t.depth = 6;
  CHECK(run_suite(t).passed());
}

TEST_CASE("summaries are deterministic across thread counts") {
  SuiteConfig c = config("norm-calibration", "heisenberg1");
  c.samples = 20000;
  setenv("CARNOT_KIT_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  const std::string one = summary_json(c, run_suite(c)).dump();
  setenv("CARNOT_KIT_THREADS", "3", 1);
  const std::string three = summary_json(c, run_suite(c)).dump();
  unsetenv("CARNOT_KIT_THREADS");
  CHECK(one == three);
  c.seed = 2;
  CHECK(summary_json(c, run_suite(c)).dump() != one);
}

TEST_CASE("outputs are written") {
  SuiteConfig c = config("group-axioms", "heisenberg1");
  c.samples = 200;
  const SuiteResult r = run_suite(c);
  const auto dir = std::filesystem::temp_directory_path() / "carnot_suite_test";
  std::filesystem::remove_all(dir);
  write_outputs(dir, c, r, 0.5);
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "meta.json"));
  CHECK(std::filesystem::exists(dir / "associativity.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(j.at("suite") == "group-axioms");
  CHECK(j.at("seed") == 1);
  CHECK(j.dump() == summary_json(c, r).dump());
  std::filesystem::remove_all(dir);
}

TEST_CASE("Heisenberg reachability fails above the observed minimum coefficient") {
  SuiteConfig c = config("reachability", "heisenberg1");
  c.params["samples_per_center"] = "8";
  const SuiteResult ok = run_suite(c);
  CHECK(ok.passed());
  const double m = ok.summary.at("min_nonzero").get<double>();
  c.params["xi"] = std::to_string(4.0 * m);
  const SuiteResult bad = run_suite(c);
  CHECK(bad.summary.at("pass_fraction").get<double>() < ok.summary.at("pass_fraction").get<double>());
}
