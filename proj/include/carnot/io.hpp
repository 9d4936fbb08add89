#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "carnot/decomposition.hpp"
#include "carnot/ledger.hpp"
#include "carnot/tiling.hpp"

namespace carnot {

/// Shortest round-trip form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// Non-finite values become strings so the output stays valid JSON.
nlohmann::json number_json(double x);
nlohmann::json to_json(const Vector& v);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::string to_csv() const;
};

void write_text(const std::filesystem::path& path, const std::string& text);

nlohmann::json word_json(const DecompositionWord& word, const HorizontalBasis& basis);
nlohmann::json certificate_json(const CalibrationCertificate& c);
nlohmann::json tile_report_json(const TileReport& r);
nlohmann::json ledger_json(const ConstantLedger& L);

/// Rows x_1..x_n, w with a header line.
std::string cloud_csv(const PointCloud& cloud, const std::vector<double>& weights);
/// Inverse of cloud_csv. Throws SpecError on malformed input.
std::pair<PointCloud, std::vector<double>> parse_cloud_csv(const std::string& text);

}  // namespace carnot
