#include "carnot/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace carnot {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

json to_json(const Vector& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(number_json(v[i]));
  return a;
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw DomainError("table row has the wrong width for " + name);
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << '\n';
  }
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json word_json(const DecompositionWord& w, const HorizontalBasis& basis) {
  json b = json::array();
  for (const auto& v : basis.vectors()) b.push_back(to_json(v));
  json s = json::array();
  for (double x : w.scalars) s.push_back(number_json(x));
  return {{"basis", b},
          {"pattern", w.pattern},
          {"scalars", s},
          {"certificate",
           {{"max_scalar_over_norm", number_json(w.bound_ratio)},
            {"target_norm", number_json(w.target_norm)},
            {"reconstruction_error", number_json(w.reconstruction_error)}}}};
}

json certificate_json(const CalibrationCertificate& c) {
  return {{"seed", c.seed},
          {"samples", c.samples},
          {"max_ratio", number_json(c.max_ratio)},
          {"pi1_lipschitz", number_json(c.pi1_lipschitz)},
          {"rounds", c.rounds},
          {"passed", c.passed},
          {"worst_x", to_json(c.worst_x)},
          {"worst_y", to_json(c.worst_y)}};
}

json tile_report_json(const TileReport& r) {
  return {{"depth", r.depth},
          {"cloud_depth", r.cloud_depth},
          {"self_similarity_defect", number_json(r.self_similarity_defect)},
          {"prefix_defect", number_json(r.prefix_defect)},
          {"overlap_fraction", number_json(r.overlap_fraction)},
          {"occupied_cells", r.occupied_cells},
          {"shared_cells", r.shared_cells},
          {"lambda_emp", number_json(r.lambda_emp)},
          {"diam_emp", number_json(r.diam_emp)},
          {"hull_tolerance", number_json(r.hull_tolerance)}};
}

json ledger_json(const ConstantLedger& L) {
  const auto& in = L.inputs;
  json checks = json::array();
  for (const auto& c : L.checks)
    checks.push_back({{"name", c.name},
                      {"verdict", c.pass ? "pass" : "fail"},
                      {"log_lhs", number_json(c.log_lhs)},
                      {"log_rhs", number_json(c.log_rhs)},
                      {"shrink", c.shrink}});
  return {{"inputs",
           {{"diam", in.diam},
            {"c0", in.c0},
            {"M", in.M},
            {"lambda", in.lambda},
            {"lip_phi", in.lip_phi},
            {"s", in.s},
            {"C", in.C},
            {"C1", in.C1},
            {"xi", in.xi},
            {"c_surj", in.c_surj}}},
          {"eps1", number_json(L.eps1)},
          {"log_K1_bound", number_json(L.log_K1_bound)},
          {"log_K1", number_json(L.log_K1)},
          {"C7", number_json(L.C7)},
          {"N", number_json(L.N)},
          {"log_C6_bound", number_json(L.log_C6_bound)},
          {"log_C6", number_json(L.log_C6)},
          {"C5", number_json(L.C5)},
          {"log_C11", number_json(L.log_C11)},
          {"log_C4", number_json(L.log_C4)},
          {"log_C2", number_json(L.log_C2)},
          {"shrink_rounds", L.shrink_rounds},
          {"checks", checks},
          {"all_pass", L.all_pass()}};
}

std::string cloud_csv(const PointCloud& cloud, const std::vector<double>& weights) {
  if (weights.size() != cloud.size()) throw DomainError("one weight per point is required");
  std::ostringstream os;
  for (int i = 0; i < cloud.dim; ++i) os << "x" << i + 1 << ',';
  os << "w\n";
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    for (int i = 0; i < cloud.dim; ++i) os << format_number(cloud.data[k * cloud.dim + i]) << ',';
    os << format_number(weights[k]) << '\n';
  }
  return os.str();
}

std::pair<PointCloud, std::vector<double>> parse_cloud_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SpecError("cloud CSV is empty");
  const int cols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  if (cols < 2) throw SpecError("cloud CSV needs coordinates and a weight column");
  PointCloud cloud(cols - 1);
  std::vector<double> w;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw SpecError("cloud CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<int>(vals.size()) != cols)
      throw SpecError("cloud CSV line " + std::to_string(lineno) + " has " + std::to_string(vals.size()) + " fields");
    for (int i = 0; i + 1 < cols; ++i) cloud.data.push_back(vals[i]);
    w.push_back(vals.back());
  }
  return {std::move(cloud), std::move(w)};
}

}  // namespace carnot
