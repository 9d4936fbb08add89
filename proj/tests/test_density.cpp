#include "doctest.h"

#include <cmath>

#include "carnot/catalog.hpp"
#include "carnot/density.hpp"
#include "carnot/sampling.hpp"

using namespace carnot;

namespace {

std::size_t brute_count(const HomogeneousNorm& n, const PointCloud& c, const Vector& x, double r) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (n.distance(x, c.point(i)) <= r) ++k;
  return k;
}

}  // namespace

TEST_CASE("spatial index agrees with a linear scan") {
  for (const char* name : {"heisenberg1", "engel", "euclidean2"}) {
    auto G = catalog_group(name);
    const HomogeneousNorm n = HomogeneousNorm::unit(G);
    const PointCloud cloud = uniform_ball_cloud(n, 1.0, 3000, 5);
    const SpatialIndex idx(n, cloud, 0.2);
    Rng rng = make_rng(8, 0);
    for (int q = 0; q < 40; ++q) {
      const Vector x = random_box_point(rng, *G, 1.0);
      const double r = uniform(rng, 0.01, 0.8);
      CHECK(idx.count_in_ball(x, r) == brute_count(n, cloud, x, r));
      const auto d = idx.distances_within(x, r);
      CHECK(std::is_sorted(d.begin(), d.end()));
      if (const auto nn = idx.nearest(x, r)) CHECK(nn->second == doctest::Approx(d.front()));
    }
  }
}

TEST_CASE("Hausdorff distance") {
  auto G = catalog_group("heisenberg1");
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const PointCloud a = uniform_ball_cloud(n, 1.0, 500, 3);
  CHECK(hausdorff_distance(n, a, a) == 0.0);
  PointCloud b = a;
  b.push_back(Vector{3.0, 0.0, 0.0});
  const double h = hausdorff_distance(n, a, b);
  CHECK(h > 1.5);
  CHECK(h == hausdorff_distance(n, b, a));
}

TEST_CASE("geometric radii") {
  const auto r = geometric_radii(1e-3, 1.0, 4);
  REQUIRE(r.size() == 4u);
  CHECK(r[0] == doctest::Approx(1e-3));
  CHECK(r[1] == doctest::Approx(1e-2));
  CHECK(r[3] == doctest::Approx(1.0));
}

TEST_CASE("weighted clouds") {
  auto G = catalog_group("euclidean1");
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  PointCloud c(1);
  for (double x : {0.0, 0.5, 1.0}) c.push_back(Vector{x});
  const WeightedCloud w(n, c, {1.0, 2.0, 4.0}, 0.25);
  CHECK(w.total_mass() == 7.0);
  CHECK(w.ball_mass(Vector{0.0}, 0.6) == 3.0);
  CHECK(w.ball_mass(Vector{0.75}, 0.3) == 6.0);
  CHECK_THROWS_AS(WeightedCloud(n, c, {1.0, -1.0, 1.0}, 0.25), DomainError);
  CHECK_THROWS_AS(WeightedCloud(n, c, {1.0, 1.0}, 0.25), DomainError);
}

TEST_CASE("density on a uniform Heisenberg cloud is nearly constant") {
  auto G = catalog_group("heisenberg1");
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const WeightedCloud w(n, uniform_ball_cloud(n, 1.0, 40000, 2), 0.25);
  const auto radii = geometric_radii(1e-3, 1.0, 31);
  const auto est = density_estimates(w, G->identity(), radii, 4.0, w.resolution_floor());
  CHECK(est.theta_lower > 0.0);
  CHECK(est.theta_upper / est.theta_lower < 2.0);
  CHECK_FALSE(est.decades.empty());
  CHECK_THROWS_AS(density_estimates(w, G->identity(), radii, 4.0, 10.0), DomainError);
}

TEST_CASE("a vertical segment has diverging density at Q = 4") {
  auto G = catalog_group("heisenberg1");
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const WeightedCloud w(n, vertical_axis_cloud(*G, 0.5, 40000, 4), 0.25);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vector p = w.points().point(i);
    CHECK((p[0] == 0.0 && p[1] == 0.0 && std::fabs(p[2]) <= 0.5));
    if (i > 20) break;
  }
  const auto est = density_estimates(w, G->identity(), geometric_radii(1e-3, 1.0, 31), 4.0, w.resolution_floor());
  CHECK(est.top_decade_ratio > 5.0);
}

TEST_CASE("coverage grid and David-Semmes membership") {
  auto G = catalog_group("heisenberg1");
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const CoverageGrid grid(n, 0.4);
  CHECK(grid.reference_cells() >= 100u);
  CHECK(grid.cell_of(G->identity()) >= 0);
  CHECK(grid.cell_of(Vector{5.0, 0.0, 0.0}) == -1);
  CHECK_THROWS_AS(CoverageGrid(n, 0.0), DomainError);

  const WeightedCloud uniform(n, uniform_ball_cloud(n, 1.0, 200000, 6), 0.25);
  DavidOptions opt;
  opt.evaluation_points = 30;
  const auto good = david_fraction(uniform, identity_map(G), opt);
  CHECK(good.evaluated == 30u);
  CHECK(good.fraction > 0.8);
  const WeightedCloud axis(n, vertical_axis_cloud(*G, 0.5, 20000, 6), 0.25);
  CHECK(david_fraction(axis, identity_map(G), opt).fraction < 0.05);
}
