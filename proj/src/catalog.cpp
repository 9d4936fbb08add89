#include "carnot/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef CARNOT_KIT_DATA_DIR
#define CARNOT_KIT_DATA_DIR "data"
#endif

namespace carnot {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw UnknownName("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("CARNOT_KIT_DATA"); env && *env) return env;
  return CARNOT_KIT_DATA_DIR;
}

CatalogEntry parse_group_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("group JSON does not parse: ") + e.what());
  }
  CatalogEntry e;
  try {
    e.name = j.value("name", std::string("unnamed"));
    e.description = j.value("description", std::string());
    e.spec.name = e.name;
    e.spec.strata = j.at("strata").get<std::vector<int>>();
    for (const auto& b : j.value("brackets", json::array())) {
      if (!b.is_array() || b.size() != 4) throw SpecError("bracket entries must be [i, j, k, c]");
      e.spec.brackets.push_back({b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<double>()});
    }
    if (j.contains("norm_eps")) e.norm_eps = j.at("norm_eps").get<std::vector<double>>();
  } catch (const json::exception& ex) {
    throw SpecError(std::string("group JSON has the wrong shape: ") + ex.what());
  }
  return e;
}

CatalogEntry load_group_file(const std::filesystem::path& path) { return parse_group_json(read_file(path)); }

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  const auto dir = data_dir() / "groups";
  if (!std::filesystem::is_directory(dir)) return names;
  for (const auto& f : std::filesystem::directory_iterator(dir))
    if (f.path().extension() == ".json") names.push_back(f.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

CatalogEntry catalog_entry(const std::string& name) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw UnknownName("unknown group '" + name + "'");
  return load_group_file(data_dir() / "groups" / (name + ".json"));
}

GroupPtr catalog_group(const std::string& name) { return CarnotGroup::create(catalog_entry(name).spec); }

HomogeneousNorm catalog_norm(const CatalogEntry& entry, GroupPtr group) {
  if (entry.norm_eps) return HomogeneousNorm(std::move(group), *entry.norm_eps);
  return HomogeneousNorm::unit(std::move(group));
}

std::vector<CatalogListing> list_catalog() {
  std::vector<CatalogListing> out;
  for (const auto& n : catalog_names()) {
    const auto e = catalog_entry(n);
    out.push_back({n, e.spec.dimension(), e.spec.step(), homogeneous_dimension(e.spec)});
  }
  return out;
}

TileEntry parse_tile_json(const std::string& text, GroupPtr group) {
  TileEntry t;
  try {
    const json j = json::parse(text);
    t.tile.group = std::move(group);
    t.tile.provenance = j.value("provenance", std::string());
    for (const auto& c : j.at("centers")) {
      const auto v = c.get<std::vector<double>>();
      if (v.size() > kMaxDim) throw SpecError("tile center too long");
      Vector p(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
      t.tile.centers.push_back(p);
    }
    if (j.contains("lambda")) t.lambda = j.at("lambda").get<double>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("tile JSON has the wrong shape: ") + e.what());
  }
  t.tile.validate();
  return t;
}

TileEntry catalog_tile(const std::string& group_name, GroupPtr group) {
  const auto p = data_dir() / "tiles" / (group_name + ".json");
  if (!std::filesystem::exists(p)) throw UnknownName("no tile shipped for '" + group_name + "'");
  return parse_tile_json(read_file(p), std::move(group));
}

}  // namespace carnot
