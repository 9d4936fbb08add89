#include "doctest.h"

#include <cmath>
#include <limits>

#include "carnot/cones.hpp"
#include "carnot/drift.hpp"
#include "carnot/sampling.hpp"

using namespace carnot;

namespace {

GroupPtr heis() { return CarnotGroup::create({"heisenberg1", {2, 1}, {{1, 2, 3, 1.0}}}); }

double abs_distance(const Vector& a, const Vector& b) { return std::fabs(a[0] - b[0]); }

Fragment line_fragment(const HomogeneousNorm& n, double mesh) {
  std::vector<double> t;
  std::vector<Vector> p;
  const int steps = static_cast<int>(std::lround(2.0 / mesh));
  for (int i = 0; i <= steps; ++i) {
    const double s = -1.0 + 2.0 * i / steps;
    Vector x = n.group()->identity();
    x[0] = s;
    t.push_back(s);
    p.push_back(x);
  }
  return Fragment::in_group(n, t, p);
}

// Grid search of |u_k + sum c_i u_i| over c in [-1,1]^{m-1}, m = 3.
double brute_ratio(const std::vector<Vector>& u, int grid) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    for (int a = 0; a <= grid; ++a)
      for (int b = 0; b <= grid; ++b) {
        const double ca = -1.0 + 2.0 * a / grid, cb = -1.0 + 2.0 * b / grid;
        best = std::min(best, euclidean_norm(u[k] + ca * u[i] + cb * u[j]));
      }
  }
  return best;
}

}  // namespace

TEST_CASE("fragments enforce the bi-Lipschitz bound") {
  std::vector<Vector> ok{Vector{0.0}, Vector{1.0}, Vector{2.5}};
  CHECK_NOTHROW(Fragment::create({0.0, 1.0, 2.0}, ok, abs_distance));
  std::vector<Vector> bad{Vector{0.0}, Vector{3.0}};
  CHECK_THROWS_AS(Fragment::create({0.0, 1.0}, bad, abs_distance), DomainError);
  CHECK_NOTHROW(Fragment::sampled({0.0, 1.0}, bad, abs_distance));
  CHECK_THROWS_AS(Fragment::create({0.0, 0.0}, {Vector{0.0}, Vector{0.0}}, abs_distance), DomainError);
}

TEST_CASE("long cells are gaps in the domain") {
  std::vector<double> t{0, 1, 2, 3, 10, 11, 12};
  std::vector<Vector> p;
  for (double s : t) p.push_back(Vector{s});
  const Fragment f = Fragment::create(t, p, abs_distance);
  CHECK(f.cell_in_domain(2));
  CHECK_FALSE(f.cell_in_domain(3));
  CHECK_FALSE(f.cell_in_domain(6));
  CHECK(f.domain_measure(0.0, 12.0) == doctest::Approx(5.0));
  CHECK(f.domain_measure(2.5, 10.5) == doctest::Approx(1.0));
  CHECK(density_fraction(f, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(density_fraction(f, 3.0, 2.0) == doctest::Approx(0.5));
  CHECK(f.index_of(10.0) == std::optional<std::size_t>(4));
  CHECK_FALSE(f.index_of(4.0));
}

TEST_CASE("derivative of a horizontal line") {
  const HomogeneousNorm n = HomogeneousNorm::unit(heis());
  const Fragment f = line_fragment(n, 1e-2);
  const auto d = fragment_derivative(f, 0.0);
  REQUIRE(d);
  CHECK(max_abs(*d - Vector{1.0, 0.0}) < 1e-12);
  CHECK_THROWS_AS(fragment_derivative(f, 0.005), DomainError);
}

TEST_CASE("cone membership and half angle") {
  const Cone c(Vector{1.0, 0.0}, 0.1);
  CHECK(c.half_angle() == doctest::Approx(std::acos(0.99)));
  CHECK(in_cone(Vector{1.0, 0.1}, c));
  CHECK_FALSE(in_cone(Vector{1.0, 0.2}, c));
  CHECK(in_cone(Vector{0.0, 0.0}, c));
  CHECK_FALSE(in_cone(Vector{0.0, 0.0}, c, true));
  CHECK_THROWS_AS(Cone(Vector{2.0, 0.0}, 0.1), DomainError);
  const Cone d = Cone::from_direction(Vector{0.0, 3.0}, 0.2);
  CHECK(d.axis[1] == 1.0);
}

TEST_CASE("C-curves") {
  const HomogeneousNorm n = HomogeneousNorm::unit(heis());
  const Fragment f = line_fragment(n, 0.05);
  CHECK(is_C_curve(f, Cone(Vector{1.0, 0.0}, 0.1)).ok);
  const auto r = is_C_curve(f, Cone(Vector{0.0, 1.0}, 0.1));
  CHECK_FALSE(r.ok);
  REQUIRE(r.violation);
  CHECK(r.violation->first < r.violation->second);
}

TEST_CASE("xi separation of two vectors is the sine of their angle") {
  for (double th : {0.1, 0.7, 1.3, M_PI / 2}) {
    const auto r = xi_separated({Vector{1.0, 0.0}, Vector{2.0 * std::cos(th), 2.0 * std::sin(th)}}, 0.05);
    CHECK(r.min_ratio == doctest::Approx(std::sin(th)).epsilon(1e-12));
    CHECK(r.separated);
  }
  CHECK_FALSE(xi_separated({Vector{1.0, 0.0}, Vector{-3.0, 0.0}}, 0.01).separated);
  CHECK(xi_separated({Vector{1.0, 0.0}, Vector{0.0, 0.0}}, 0.5).min_ratio == 1.0);
}

TEST_CASE("xi separation of three vectors agrees with a grid search") {
  Rng rng = make_rng(21, 0);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Vector> u;
    for (int k = 0; k < 3; ++k) u.push_back(random_direction(rng, trial < 3 ? 2 : 3));
    const double exact = xi_separated(u, 1e-3).min_ratio;
    const double grid = brute_ratio(u, 400);
    CHECK(exact <= grid + 1e-9);
    CHECK(exact >= grid - 0.011);
  }
  const auto ortho = xi_separated({Vector{1, 0, 0}, Vector{0, 1, 0}, Vector{0, 0, 1}}, 0.5);
  CHECK(ortho.min_ratio == doctest::Approx(1.0));
}

TEST_CASE("orthogonal cones are separated") {
  const std::vector<Cone> cones{Cone(Vector{1.0, 0.0}, 0.1), Cone(Vector{0.0, 1.0}, 0.1)};
  const auto r = cones_xi_separated(cones, 0.5);
  CHECK(r.separated);
  CHECK(r.min_ratio <= 1.0);
  CHECK(r.min_ratio > 0.9);
}

TEST_CASE("refined cone covers") {
  for (int dim : {2, 3}) {
    Vector axis(static_cast<std::size_t>(dim));
    axis[0] = 1.0;
    const std::vector<Cone> parents{Cone(axis, 0.5)};
    const auto cover = refine_cone_cover(parents, 4);
    CHECK(cover.size() > 1);
    CHECK(cover.front().cone.axis == axis);
    const auto chk = verify_cone_cover(parents, cover, 2000);
    CHECK(chk.covered);
    CHECK(chk.axes_in_parent);
    CHECK(chk.worst_margin >= 0.0);
  }
  CHECK_THROWS_AS(refine_cone_cover({Cone(Vector{1.0, 0.0}, 0.5)}, 0), DomainError);
}

TEST_CASE("drift ratios stay bounded across sigma") {
  const HomogeneousNorm n = HomogeneousNorm::unit(heis());
  const Vector e{1.0, 0.0};
  std::vector<double> ratios;
  for (double sigma : {0.1, 0.05}) {
    const Fragment f = synthetic_drift_fragment(n, sigma);
    const DriftReport rep = verify_drift(f, e, sigma, 0.0, 0.5);
    CHECK_FALSE(rep.rows.empty());
    CHECK(rep.min_density >= 1.0 - sigma);
    for (const auto& row : rep.rows) CHECK(row.lhs <= row.ratio * row.bound * (1.0 + 1e-12) + 1e-300);
    ratios.push_back(rep.max_ratio);
  }
  CHECK(ratios[0] / ratios[1] < 3.0);
  CHECK(ratios[1] / ratios[0] < 3.0);
}

TEST_CASE("drift hypotheses are enforced") {
  const HomogeneousNorm n = HomogeneousNorm::unit(heis());
  const Fragment f = synthetic_drift_fragment(n, 0.5);
  try {
    verify_drift(f, Vector{1.0, 0.0}, 0.01, 0.0, 0.5);
    FAIL("expected a hypothesis failure");
  } catch (const HypothesisError& e) {
    CHECK((e.item == "i" || e.item == "ii"));
  }
  const Fragment line = line_fragment(n, 1e-3);
  try {
    verify_drift(line, Vector{0.0, 1.0}, 0.1, 0.0, 0.5);
    FAIL("expected a cone failure");
  } catch (const HypothesisError& e) {
    CHECK(e.item == "ii");
  }
  CHECK_THROWS_AS(synthetic_drift_fragment(HomogeneousNorm::unit(CarnotGroup::create({"r1", {1}, {}})), 0.1),
                  DomainError);
}

TEST_CASE("a straight line has no drift") {
  const HomogeneousNorm n = HomogeneousNorm::unit(heis());
  const DriftReport rep = verify_drift(line_fragment(n, 1e-3), Vector{1.0, 0.0}, 0.01, 0.0, 0.5);
  for (const auto& row : rep.rows) CHECK(row.lhs < 1e-10);
}

TEST_CASE("good-point witness on a line") {
  auto G = heis();
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const Fragment f = line_fragment(n, 1e-2);
  WitnessParams p;
  p.y = G->identity();
  p.v = 0.5;
  p.K1 = 0.1;
  p.e = Vector{1.0, 0.0};
  p.radius_bound = 0.3;
  const auto id = [](const Vector& x) { return x; };
  const auto ok = good_point_witness(f, id, *G, 0.0, p);
  CHECK(ok.pass);
  CHECK(ok.log_kappa == doctest::Approx(std::log(0.05)));
  p.y = Vector{0.5, 0.0, 0.0};
  const auto moved = good_point_witness(f, id, *G, 0.0, p);
  CHECK_FALSE(moved.pass);
  CHECK(moved.failed_clause == 1);
  p.y = G->identity();
  p.e = Vector{0.0, 1.0};
  const auto turned = good_point_witness(f, id, *G, 0.0, p);
  CHECK_FALSE(turned.pass);
  CHECK(turned.failed_clause == 3);
  p.e = Vector{1.0, 0.0};
  p.v = 3.0;
  const auto fast = good_point_witness(f, id, *G, 0.0, p);
  CHECK_FALSE(fast.pass);
  CHECK(fast.failed_clause == 3);
}
