#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/catalog.hpp"
#include "carnot/io.hpp"
#include "carnot/suites.hpp"

using namespace carnot;

namespace {

struct Timed {
  SuiteResult result;
  double seconds = 0.0;
};

Timed run(const std::string& suite, const std::string& group, std::map<std::string, std::string> params = {},
          std::optional<int> depth = std::nullopt, std::uint64_t seed = 1) {
  SuiteConfig c;
  c.suite = suite;
  c.group = group;
  c.params = std::move(params);
  c.depth = depth;
  c.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{run_suite(c), 0.0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

// Collects failures for one criterion.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void suite(const Timed& t, const std::string& tag) {
    for (const auto& c : t.result.checks)
      if (!c.pass) failures_.push_back(tag + " " + c.name + " (" + c.detail + ")");
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string text() const {
    std::ostringstream os;
    const auto& v = failures_.empty() ? notes_ : failures_;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
    return os.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  return std::stod(v.get<std::string>());
}

Verdict group_axioms() {
  Verdict v;
  for (const auto& name : catalog_names()) {
    const Timed t = run("group-axioms", name);
    v.suite(t, name);
    v.require(t.result.summary.at("triples") == 10000, name + " triple count");
    v.require(t.seconds < 5.0, name + " took " + num(t.seconds) + " s");
    v.note(name + " " + num(field(t.result.summary, "associativity_quad")) + " in " + num(t.seconds) + " s");
  }
  return v;
}

Verdict correction_properties() {
  Verdict v;
  for (const auto& name : catalog_names()) {
    const Timed t = run("group-axioms", name, {{"q_tolerance", "1e-10"}});
    for (const auto& c : t.result.checks)
      if (c.name.rfind("Q_", 0) == 0) v.require(c.pass, name + " " + c.name + " (" + c.detail + ")");
  }
  v.note("Q_1 = 0, homogeneity and antisymmetry within 1e-10 on every catalog group");
  return v;
}

Verdict calibration() {
  Verdict v;
  for (const char* name : {"heisenberg1", "engel"}) {
    const Timed t = run("norm-calibration", name);
    v.suite(t, name);
    const auto& cert = t.result.summary.at("certificate");
    v.require(cert.at("samples").get<double>() >= 1e6, std::string(name) + " certified on fewer than 1e6 pairs");
    v.note(std::string(name) + " max ratio " + num(field(cert, "max_ratio")));
  }
  return v;
}

Verdict pansu() {
  Verdict v;
  const Timed t = run("pansu-estimate", "heisenberg1");
  v.suite(t, "heisenberg1");
  v.require(t.result.summary.at("homs") == 20, "hom count");
  for (const char* c : {"blocks_heisenberg1", "residuals_heisenberg1", "blocks_euclidean2", "residuals_euclidean2",
                        "smooth_slope"}) {
    bool seen = false;
    for (const auto& ch : t.result.checks) seen = seen || ch.name == c;
    v.require(seen, std::string("missing check ") + c);
  }
  v.note("slope " + num(field(t.result.summary, "smooth_slope")));
  return v;
}

Verdict decomposition() {
  Verdict v;
  for (const auto& name : catalog_names()) {
    const Timed t = run("decompose-roundtrip", name);
    v.suite(t, name);
    v.require(t.result.summary.at("targets_per_seed") == 1000, name + " target count");
    if (name == "heisenberg1") {
      bool seen = false;
      for (const auto& c : t.result.checks) seen = seen || c.name == "commutator_identity";
      v.require(seen, "commutator check missing");
    }
  }
  v.note("all catalog groups round-trip with stable c0");
  return v;
}

Verdict drift() {
  Verdict v;
  const Timed t = run("drift", "heisenberg1", {{"sigmas", "0.1,0.05,0.01"}});
  v.suite(t, "heisenberg1");
  v.require(t.result.summary.at("sigmas").size() == 3, "three sigmas");
  v.require(t.seconds < 30.0, "took " + num(t.seconds) + " s");
  v.note("max lhs on the line " + num(field(t.result.summary, "straight_line_max_lhs")) + ", " + num(t.seconds) + " s");
  return v;
}

Verdict tiling() {
  Verdict v;
  for (const char* name : {"euclidean1", "euclidean2"}) {
    const Timed t = run("tiling-verify", name);
    v.suite(t, name);
    v.require(!t.result.summary.at("lambda_analytic").is_null(), std::string(name) + " has no analytic lambda");
  }
  const Timed h = run("tiling-verify", "heisenberg1", {}, 6);
  v.suite(h, "heisenberg1");
  v.require(h.result.tables.at(0).rows.front()[0] == 4.0, "Heisenberg overlap table starts at depth 4");
  v.note("heisenberg1 lambda " + num(field(h.result.summary, "lambda_emp")));
  return v;
}

Verdict reachability() {
  Verdict v;
  const Timed ok = run("reachability", "euclidean1", {{"xi", "0.1"}});
  v.require(field(ok.result.summary, "pass_fraction") == 1.0, "R1 at xi 0.1 did not pass everywhere");
  const Timed bad = run("reachability", "euclidean1", {{"xi", "0.4"}});
  bool third_fails = false;
  for (const auto& c : bad.result.summary.at("centers")) {
    const double p = c.at("point").at(0).get<double>();
    if (std::fabs(p - 1.0 / 3.0) < 1e-12) third_fails = c.at("passed") < c.at("trials");
  }
  v.require(third_fails, "R1 at xi 0.4 did not fail at the center 1/3");
  v.require(!bad.result.passed(), "R1 at xi 0.4 passed");

  const Timed ledger = run("ledger", "heisenberg1");
  const double xi = field(ledger.result.summary.at("shrunk").at("inputs"), "xi");
  const Timed h = run("reachability", "heisenberg1", {{"xi", format_number(xi)}});
  v.suite(h, "heisenberg1");
  v.require(field(h.result.summary, "pass_fraction") >= 0.95, "Heisenberg pass fraction below 0.95");
  v.note("heisenberg1 xi " + num(xi) + " pass fraction " + num(field(h.result.summary, "pass_fraction")));
  return v;
}

Verdict ledger() {
  Verdict v;
  const Timed t = run("ledger", "heisenberg1");
  v.suite(t, "heisenberg1");
  v.require(!t.result.checks.empty(), "no ledger checks");
  v.note(std::to_string(t.result.checks.size()) + " checks pass after shrinking");
  return v;
}

Verdict density() {
  Verdict v;
  const Timed t = run("density-david", "heisenberg1");
  v.suite(t, "heisenberg1");
  v.require(t.result.summary.at("uniform").at("points").get<double>() >= 1e5, "uniform cloud below 1e5 points");
  v.require(field(t.result.summary, "Q") == 4.0, "Q is not 4");
  v.require(t.seconds < 60.0, "took " + num(t.seconds) + " s");
  v.note("uniform david " + num(field(t.result.summary.at("uniform"), "david_fraction")) + ", axis david " +
         num(field(t.result.summary.at("axis"), "david_fraction")) + ", " + num(t.seconds) + " s");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"group axioms on every catalog group", group_axioms},
      {"Q properties", correction_properties},
      {"norm calibration on heisenberg1 and engel", calibration},
      {"Pansu derivative recovery", pansu},
      {"horizontal decomposition round trip", decomposition},
      {"drift estimate", drift},
      {"self-similar tiles", tiling},
      {"reachability", reachability},
      {"constant ledger", ledger},
      {"density and David-Semmes regularity", density},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    if (!v.ok()) ++failed;
    std::cout << (v.ok() ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first << ": "
              << v.text() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
