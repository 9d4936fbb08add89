#include "doctest.h"

#include <cmath>
#include <limits>

#include "carnot/catalog.hpp"
#include "carnot/io.hpp"
#include "carnot/svg.hpp"

using namespace carnot;

TEST_CASE("catalog listing") {
  const auto names = catalog_names();
  CHECK(names.size() >= 7u);
  bool saw_h1 = false, saw_e3 = false;
  for (const auto& e : list_catalog()) {
    const auto entry = catalog_entry(e.name);
    CHECK(e.Q == homogeneous_dimension(entry.spec));
    CHECK(e.dim == entry.spec.dimension());
    CHECK(validate_stratification(entry.spec).ok());
    if (e.name == "heisenberg1") saw_h1 = e.Q == 4 && e.dim == 3 && e.step == 2;
    if (e.name == "euclidean3") saw_e3 = e.Q == 3 && e.step == 1;
  }
  CHECK(saw_h1);
  CHECK(saw_e3);
  CHECK(catalog_group("engel")->homogeneous_dimension() == 7);
  CHECK(catalog_group("free2_3")->dim() == 6);
  CHECK_THROWS_AS(catalog_entry("nonesuch"), UnknownName);
  CHECK_THROWS_AS(catalog_tile("engel", catalog_group("engel")), UnknownName);
}

TEST_CASE("catalog Heisenberg group matches the standard bracket") {
  const StratificationSpec ref{"h", {2, 1}, {{2, 1, 3, -1.0}}};
  CHECK(same_structure(catalog_entry("heisenberg1").spec, ref));
}

TEST_CASE("group JSON parsing") {
  const auto e = parse_group_json(R"({"name":"g","strata":[2,1],"brackets":[[1,2,3,2.0]],"norm_eps":[0.5]})");
  CHECK(e.name == "g");
  CHECK(e.spec.strata == std::vector<int>{2, 1});
  REQUIRE(e.norm_eps);
  CHECK((*e.norm_eps)[0] == 0.5);
  CHECK_THROWS_AS(parse_group_json("{"), SpecError);
  CHECK_THROWS_AS(parse_group_json(R"({"name":"g","strata":[2,1],"brackets":[[1,2,3]]})"), SpecError);
  CHECK_THROWS_AS(parse_group_json(R"({"name":"g","strata":"x","brackets":[]})"), SpecError);
}

TEST_CASE("tile JSON parsing") {
  auto G = catalog_group("euclidean1");
  const auto t = parse_tile_json(R"({"centers":[[0.0],[0.5]],"lambda":0.25})", G);
  CHECK(t.tile.centers.size() == 2u);
  REQUIRE(t.lambda);
  CHECK(*t.lambda == 0.25);
  CHECK_THROWS_AS(parse_tile_json(R"({"centers":[[0.0]]})", G), DomainError);
  CHECK_THROWS_AS(parse_tile_json(R"({"centers":3})", G), SpecError);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0013417739}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(number_json(std::nan("")).is_string());
  CHECK(number_json(2.0).is_number());
}

TEST_CASE("tables") {
  Table t{"x", {"a", "b"}, {}};
  t.add({1.0, 0.5});
  t.add({2.0, 0.25});
  CHECK(t.to_csv() == "a,b\n1,0.5\n2,0.25\n");
  CHECK_THROWS_AS(t.add({1.0}), DomainError);
}

TEST_CASE("cloud CSV round trip") {
  PointCloud c(3);
  c.push_back(Vector{0.1, -2.0, 1e-9});
  c.push_back(Vector{1.0 / 3.0, 0.0, 7.0});
  const std::string text = cloud_csv(c, {1.0, 0.5});
  const auto [back, w] = parse_cloud_csv(text);
  REQUIRE(back.size() == 2u);
  CHECK(back.data == c.data);
  CHECK(w == std::vector<double>{1.0, 0.5});
  CHECK_THROWS_AS(parse_cloud_csv(""), SpecError);
  CHECK_THROWS_AS(parse_cloud_csv("x1,w\n1,abc\n"), SpecError);
  CHECK_THROWS_AS(parse_cloud_csv("x1,x2,w\n1,2\n"), SpecError);
}

TEST_CASE("svg output") {
  SvgSeries s{"pts", {1.0, 10.0, 100.0}, {1.0, 0.1, 0.0}, palette(0), true};
  const std::string svg = render_svg({s}, "title", "x", "y", true, true);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("title") != std::string::npos);
  CHECK(palette(0) != palette(1));
}
