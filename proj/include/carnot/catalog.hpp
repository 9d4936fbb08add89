#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/tiling.hpp"

namespace carnot {

class UnknownName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// CARNOT_KIT_DATA if set, else the directory configured at build time.
std::filesystem::path data_dir();

struct CatalogEntry {
  std::string name;
  std::string description;
  StratificationSpec spec;
  /// Certified eps_2..eps_s, when shipped.
  std::optional<std::vector<double>> norm_eps;
};

/// Parses {name, strata, brackets: [[i, j, k, c], ...], norm_eps?}.
CatalogEntry parse_group_json(const std::string& text);
CatalogEntry load_group_file(const std::filesystem::path& path);

std::vector<std::string> catalog_names();
/// Throws UnknownName.
CatalogEntry catalog_entry(const std::string& name);
GroupPtr catalog_group(const std::string& name);
/// Shipped eps when present, otherwise all ones.
HomogeneousNorm catalog_norm(const CatalogEntry& entry, GroupPtr group);

struct CatalogListing {
  std::string name;
  int dim = 0;
  int step = 0;
  int Q = 0;
};
std::vector<CatalogListing> list_catalog();

struct TileEntry {
  TileSpec tile;
  /// Analytic interior radius, when known.
  std::optional<double> lambda;
};

TileEntry parse_tile_json(const std::string& text, GroupPtr group);
/// Tile shipped for the named group; throws UnknownName if none.
TileEntry catalog_tile(const std::string& group_name, GroupPtr group);

}  // namespace carnot
