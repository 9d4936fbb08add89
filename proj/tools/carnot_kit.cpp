#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carnot/catalog.hpp"
#include "carnot/error.hpp"
#include "carnot/suites.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

void print_catalog() {
  for (const auto& e : carnot::list_catalog())
    std::cout << e.name << " Q=" << e.Q << " dim=" << e.dim << " step=" << e.step << "\n";
}

void print_suites() {
  for (const auto& s : carnot::suite_catalog()) {
    std::cout << s.name << " (default group " << s.default_group << "): " << s.description << "\n";
    if (!s.params.empty()) {
      std::cout << "  params:";
      for (const auto& p : s.params) std::cout << " " << p;
      std::cout << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carnot-kit: verification suites for Carnot group geometry"};
  carnot::SuiteConfig cfg;
  std::string spec;
  std::string out_dir = "carnot-out";
  std::vector<std::string> params;
  int depth = 0;
  std::size_t samples = 0;
  bool list = false, list_suites = false;

  app.add_option("--group", cfg.group, "catalog group name");
  app.add_option("--spec", spec, "group JSON file used instead of --group")->check(CLI::ExistingFile);
  app.add_option("--suite", cfg.suite, "suite to run");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--depth", depth, "tile depth")->check(CLI::PositiveNumber);
  app.add_option("--samples", samples, "sample count override")->check(CLI::PositiveNumber);
  app.add_option("--params", params, "suite parameters as key=value")->take_all();
  app.add_flag("--list-catalog", list, "print catalog groups with Q and exit");
  app.add_flag("--list-suites", list_suites, "print suites and their parameters and exit");
  app.footer("Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (list) {
      print_catalog();
      return kPass;
    }
    if (list_suites) {
      print_suites();
      return kPass;
    }
    if (cfg.suite.empty()) {
      std::cerr << "error: --suite is required (see --list-suites)\n";
      return kUsage;
    }
    if (!spec.empty() && !cfg.group.empty()) {
      std::cerr << "error: give either --group or --spec, not both\n";
      return kUsage;
    }
    if (!spec.empty()) cfg.spec_path = spec;
    if (depth > 0) cfg.depth = depth;
    if (samples > 0) cfg.samples = samples;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --params expects key=value, got '" << kv << "'\n";
        return kUsage;
      }
      cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }

    const auto t0 = std::chrono::steady_clock::now();
    const carnot::SuiteResult result = carnot::run_suite(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    carnot::write_outputs(out_dir, cfg, result, seconds);

    for (const auto& c : result.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (const carnot::SuiteCheck* f = result.first_failure()) {
      std::cerr << "failed check: " << f->name << "\n";
      return kFail;
    }
    return kPass;
  } catch (const carnot::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const carnot::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
