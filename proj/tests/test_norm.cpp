#include "doctest.h"

#include <cmath>

#include "carnot/norm.hpp"

using namespace carnot;

namespace {

GroupPtr heis() { return CarnotGroup::create({"heisenberg1", {2, 1}, {{1, 2, 3, 1.0}}}); }
GroupPtr engel() { return CarnotGroup::create({"engel", {2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}}}); }

double heis_norm(const Vector& g, double eps) { return std::max(std::hypot(g[0], g[1]), eps * std::sqrt(std::fabs(g[2]))); }

}  // namespace

TEST_CASE("hom_root scales exactly under powers of two") {
  for (int k : {1, 2, 3, 4}) {
    for (double x : {0.3, 1.0, 7.5, 1e-9, 123456.0}) {
      const double r = math::hom_root(x, k);
      CHECK(r == doctest::Approx(std::pow(x, 1.0 / k)).epsilon(1e-15));
      for (int m = -5; m <= 5; ++m) CHECK(math::hom_root(std::ldexp(x, k * m), k) == std::ldexp(r, m));
    }
  }
  CHECK(math::hom_root(0.0, 3) == 0.0);
}

TEST_CASE("Euclidean groups get the Euclidean norm") {
  auto G = CarnotGroup::create({"r3", {3}, {}});
  HomogeneousNorm n = HomogeneousNorm::unit(G);
  CHECK(n(Vector{3, 4, 12}) == doctest::Approx(13.0));
  CHECK(n.distance(Vector{1, 1, 1}, Vector{1, 1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("Heisenberg norm closed form, homogeneity and symmetry") {
  auto G = heis();
  HomogeneousNorm n(G, {0.75});
  Rng rng = make_rng(1);
  for (int i = 0; i < 500; ++i) {
    const Vector g = random_box_point(rng, *G, 3.0);
    CHECK(n(g) == doctest::Approx(heis_norm(g, 0.75)).epsilon(1e-15));
    CHECK(n(G->inverse(g)) == n(g));
    for (int k = -6; k <= 6; ++k) CHECK(n(G->dilate(std::ldexp(1.0, k), g)) == std::ldexp(n(g), k));
    const double lam = uniform(rng, 0.1, 10.0);
    CHECK(n(G->dilate(lam, g)) == doctest::Approx(lam * n(g)).epsilon(1e-14));
  }
  CHECK(n.dominant_stratum(Vector{0.1, 0.0, 4.0}) == 2);
  CHECK(n.dominant_stratum(Vector{3.0, 0.0, 1.0}) == 1);
}

TEST_CASE("sphere samples have unit norm") {
  for (auto G : {heis(), engel()}) {
    HomogeneousNorm n = HomogeneousNorm::unit(G);
    Rng rng = make_rng(2);
    for (int i = 0; i < 200; ++i) CHECK(n(n.sample_unit_sphere(rng)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("certification accepts eps = 1 on the Heisenberg group") {
  auto G = heis();
  HomogeneousNorm n = HomogeneousNorm::unit(G);
  const auto cert = certify_triangle(n, 100000, 3);
  CHECK(cert.passed);
  CHECK(cert.max_ratio <= 1.0 + 1e-12);
  CHECK(cert.pi1_lipschitz <= 1.0 + 1e-12);
  // Independent check with the closed-form norm.
  Rng rng = make_rng(4);
  for (int i = 0; i < 20000; ++i) {
    const Vector x = random_box_point(rng, *G, 2.0), y = random_box_point(rng, *G, 2.0);
    CHECK(heis_norm(G->multiply(x, y), 1.0) <= (heis_norm(x, 1.0) + heis_norm(y, 1.0)) * (1 + 1e-12));
  }
}

TEST_CASE("certification rejects a large eps") {
  auto G = heis();
  HomogeneousNorm n(G, {10.0});
  const auto cert = certify_triangle(n, 20000, 5);
  CHECK_FALSE(cert.passed);
  CHECK(cert.max_ratio > 1.0);
  // The recorded worst pair really violates the inequality.
  CHECK(n(G->multiply(cert.worst_x, cert.worst_y)) > n(cert.worst_x) + n(cert.worst_y));
}

TEST_CASE("calibration certifies Heisenberg and Engel") {
  for (auto G : {heis(), engel()}) {
    CalibrationOptions opt;
    opt.search_samples = 5000;
    const HomogeneousNorm n = calibrate_box_norm(G, 100000, opt);
    REQUIRE(n.certificate());
    CHECK(n.certificate()->passed);
    CHECK(n.certificate()->samples == 100000);
    for (double e : n.epsilons()) CHECK(e > 0.0);
  }
}

TEST_CASE("norm construction validates eps") {
  auto G = heis();
  CHECK_THROWS(HomogeneousNorm(G, {}));
  CHECK_THROWS(HomogeneousNorm(G, {-1.0}));
}
