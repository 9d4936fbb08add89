#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "carnot/io.hpp"

namespace carnot {

/// Bad configuration: unknown suite, group or parameter.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  std::string suite;
  /// Catalog name; empty means the suite default.
  std::string group;
  /// Group JSON file used instead of the catalog.
  std::optional<std::filesystem::path> spec_path;
  std::uint64_t seed = 1;
  std::optional<int> depth;
  std::optional<std::size_t> samples;
  std::map<std::string, std::string> params;
};

struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::string group;
  std::uint64_t seed = 0;
  std::vector<SuiteCheck> checks;
  /// Deterministic numbers only; nothing time-dependent.
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Table> tables;
  /// (file name, document)
  std::vector<std::pair<std::string, std::string>> svgs;

  bool passed() const;
  const SuiteCheck* first_failure() const;
  void check(std::string name, bool pass, std::string detail);
};

struct SuiteInfo {
  std::string name;
  std::string default_group;
  std::string description;
  std::vector<std::string> params;
};

const std::vector<SuiteInfo>& suite_catalog();

/// Throws UsageError for unknown suites, groups or parameter names.
SuiteResult run_suite(const SuiteConfig& config);

nlohmann::json summary_json(const SuiteConfig& config, const SuiteResult& result);

/// summary.json, one CSV per table, the SVGs and meta.json (timing and
/// thread count, kept apart so summary.json is reproducible).
void write_outputs(const std::filesystem::path& dir, const SuiteConfig& config, const SuiteResult& result,
                   double seconds);

}  // namespace carnot
