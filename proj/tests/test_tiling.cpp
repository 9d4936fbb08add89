#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "carnot/catalog.hpp"
#include "carnot/sampling.hpp"
#include "carnot/tiling.hpp"

using namespace carnot;

namespace {

Vector heis_mul(const Vector& p, const Vector& q) {
  return Vector{p[0] + q[0], p[1] + q[1], p[2] + q[2] + 0.5 * (p[0] * q[1] - p[1] * q[0])};
}

std::vector<std::vector<double>> sorted_points(const PointCloud& c) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vector p = c.point(i);
    out.emplace_back(p.begin(), p.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("interval attractor matches binary address sums") {
  auto G = catalog_group("euclidean1");
  const TileEntry e = catalog_tile("euclidean1", G);
  REQUIRE(e.lambda);
  const int depth = 6;
  const PointCloud a = attractor(e.tile, depth);
  CHECK(a.size() == 64u);
  std::vector<std::vector<double>> ref;
  for (int w = 0; w < 64; ++w) {
    double x = 0.0;
    for (int k = 0; k < depth; ++k) x += std::ldexp(e.tile.centers[(w >> (depth - 1 - k)) & 1][0], -k);
    ref.push_back({x});
  }
  std::sort(ref.begin(), ref.end());
  const auto got = sorted_points(a);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(got[i][0] == doctest::Approx(ref[i][0]).epsilon(1e-15));
  CHECK(got.front()[0] >= -1.0 / 3 - 1e-12);
  CHECK(got.back()[0] <= 2.0 / 3 + 1e-12);
}

TEST_CASE("Heisenberg tile is the conjugated lattice tile") {
  auto G = catalog_group("heisenberg1");
  const TileEntry e = catalog_tile("heisenberg1", G);
  CHECK(e.tile.centers.size() == 16u);
  const Vector tau{-0.5, -0.5, -0.5};
  const Vector half_tau_inv{0.25, 0.25, 0.125};
  std::vector<std::vector<double>> ref, got;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 4; ++c) {
        const Vector q{a / 2.0, b / 2.0, (c - a * b / 2.0) / 4.0};
        const Vector p = heis_mul(heis_mul(tau, q), half_tau_inv);
        ref.push_back({p[0], p[1], p[2]});
      }
  for (const auto& p : e.tile.centers) got.push_back({p[0], p[1], p[2]});
  std::sort(ref.begin(), ref.end());
  std::sort(got.begin(), got.end());
  CHECK(ref == got);
}

TEST_CASE("recursive, nested and prefix evaluations agree") {
  auto G = catalog_group("heisenberg1");
  const TileEntry e = catalog_tile("heisenberg1", G);
  const PointCloud r = attractor(e.tile, 3), n = attractor_nested(e.tile, 3), p = attractor_by_address(e.tile, 3);
  REQUIRE(r.size() == 4096u);
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    worst = std::max(worst, max_abs(r.point(i) - n.point(i)));
    worst = std::max(worst, max_abs(r.point(i) - p.point(i)));
  }
  CHECK(worst == 0.0);
}

TEST_CASE("tile validation") {
  auto G = catalog_group("euclidean1");
  TileSpec t{G, {Vector{0.0}}, ""};
  CHECK_THROWS_AS(t.validate(), DomainError);
  t.centers = {Vector{0.0}, Vector{0.0, 1.0}};
  CHECK_THROWS_AS(t.validate(), SpecMismatch);
}

TEST_CASE("overlap of the interval tile shrinks with depth") {
  auto G = catalog_group("euclidean1");
  const TileEntry e = catalog_tile("euclidean1", G);
  double prev = 1.0;
  for (int depth = 4; depth <= 8; ++depth) {
    const OverlapCount oc = overlap_count(e.tile, depth, 2.0);
    CHECK(oc.fraction < std::ldexp(1.0, 2 - depth));
    CHECK(oc.fraction <= prev);
    prev = oc.fraction;
  }
}

TEST_CASE("square tile") {
  auto G = catalog_group("euclidean2");
  const TileEntry e = catalog_tile("euclidean2", G);
  const HomogeneousNorm n = catalog_norm(catalog_entry("euclidean2"), G);
  TileOptions opt;
  opt.depth = 6;
  const TileReport rep = verify_tile(e.tile, n, opt);
  CHECK(rep.self_similarity_defect == 0.0);
  CHECK(rep.overlap_fraction < std::ldexp(1.0, -4));
  REQUIRE(e.lambda);
  CHECK(std::fabs(rep.lambda_emp - *e.lambda) < 0.1 * *e.lambda);
  CHECK(rep.diam_emp > 0.0);
}

TEST_CASE("translated tiles follow the translation") {
  auto G = catalog_group("heisenberg1");
  const TileEntry e = catalog_tile("heisenberg1", G);
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const Vector tau{0.05, -0.02, 0.0025};
  const TranslatedTile t = translate_tile(e.tile, tau, n, 0.4);
  CHECK(t.tau_norm == doctest::Approx(n(tau)));
  CHECK(t.margin == doctest::Approx(0.1 - t.tau_norm));
  CHECK_FALSE(t.warning);
  const int depth = 3;
  const PointCloud base = attractor(e.tile, depth), moved = attractor(t.tile, depth);
  PointCloud shifted(3);
  for (std::size_t i = 0; i < base.size(); ++i) shifted.push_back(G->multiply(tau, base.point(i)));
  CHECK(hausdorff_distance(n, shifted, moved) <= std::ldexp(t.tau_norm, -depth) + 1e-12);
  CHECK(translate_tile(e.tile, Vector{0.5, 0.0, 0.0}, n, 0.4).warning);
}

TEST_CASE("sampled balls stay inside the radius") {
  auto G = catalog_group("heisenberg1");
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  Rng rng = make_rng(2, 0);
  for (int k = 0; k < 500; ++k) CHECK(n(sample_ball(n, 0.2, rng)) <= 0.2 * (1 + 1e-12));
}

TEST_CASE("reachability on the interval") {
  auto G = catalog_group("euclidean1");
  const TileEntry e = catalog_tile("euclidean1", G);
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const Decomposer d(G, HorizontalBasis::standard(*G), n);
  ReachabilityParams p;
  p.c0 = 1.5;
  p.xi = 0.1;
  const auto ok = reachability_check(e.tile, d, {HorizontalBasis::standard(*G)}, p);
  CHECK(ok.pass_fraction == 1.0);
  CHECK(ok.min_nonzero > 0.1);
  p.xi = 0.4;
  const auto bad = reachability_check(e.tile, d, {HorizontalBasis::standard(*G)}, p);
  REQUIRE(bad.centers.size() == 2u);
  CHECK(bad.centers[1].passed == 0);
  CHECK(bad.pass_fraction < 1.0);
}
