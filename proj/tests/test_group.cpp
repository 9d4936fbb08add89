#include "doctest.h"

#include <Eigen/Dense>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/sampling.hpp"

using namespace carnot;

namespace {

GroupPtr heis() { return CarnotGroup::create({"heisenberg1", {2, 1}, {{1, 2, 3, 1.0}}}); }
GroupPtr engel() { return CarnotGroup::create({"engel", {2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}}}); }

Eigen::MatrixXd nil_exp(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(x.rows(), x.cols()), term = out;
  for (int k = 1; k < x.rows(); ++k) {
    term = term * x / k;
    out += term;
  }
  return out;
}

Eigen::MatrixXd unipotent_log(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd z = m - Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols()), power = z;
  for (int k = 1; k < m.rows(); ++k) {
    out += (k % 2 ? 1.0 : -1.0) * power / k;
    power = power * z;
  }
  return out;
}

// X1 = E12, X2 = E23, X3 = E13.
Eigen::MatrixXd heis_matrix(const Vector& v) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 1) = v[0];
  m(1, 2) = v[1];
  m(0, 2) = v[2];
  return m;
}

// X1 = E12 + E23 + E34, X2 = E34, X3 = E24, X4 = E14.
Eigen::MatrixXd engel_matrix(const Vector& v) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 1) = m(1, 2) = v[0];
  m(2, 3) = v[0] + v[1];
  m(1, 3) = v[2];
  m(0, 3) = v[3];
  return m;
}

}  // namespace

TEST_CASE("Heisenberg product agrees with 3x3 matrices") {
  auto G = heis();
  Rng rng = make_rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vector p = random_box_point(rng, *G, 3.0), q = random_box_point(rng, *G, 3.0);
    const Eigen::MatrixXd l = unipotent_log(nil_exp(heis_matrix(p)) * nil_exp(heis_matrix(q)));
    const Vector pq = G->multiply(p, q);
    CHECK(pq[0] == doctest::Approx(l(0, 1)).epsilon(1e-13));
    CHECK(pq[1] == doctest::Approx(l(1, 2)).epsilon(1e-13));
    CHECK(pq[2] == doctest::Approx(l(0, 2)).epsilon(1e-13));
    // Closed form.
    CHECK(pq[2] == doctest::Approx(p[2] + q[2] + 0.5 * (p[0] * q[1] - p[1] * q[0])).epsilon(1e-14));
  }
}

TEST_CASE("Engel product agrees with 4x4 matrices") {
  auto G = engel();
  Rng rng = make_rng(2);
  for (int i = 0; i < 200; ++i) {
    const Vector p = random_box_point(rng, *G, 2.0), q = random_box_point(rng, *G, 2.0);
    const Eigen::MatrixXd l = unipotent_log(nil_exp(engel_matrix(p)) * nil_exp(engel_matrix(q)));
    const Vector pq = G->multiply(p, q);
    CHECK(std::fabs(l(0, 1) - l(1, 2)) < 1e-12);
    CHECK(pq[0] == doctest::Approx(l(0, 1)).epsilon(1e-12));
    CHECK(pq[1] == doctest::Approx(l(2, 3) - l(0, 1)).epsilon(1e-12));
    CHECK(pq[2] == doctest::Approx(l(1, 3)).epsilon(1e-12));
    CHECK(pq[3] == doctest::Approx(l(0, 3)).epsilon(1e-12));
  }
}

TEST_CASE("abelian product is addition") {
  auto G = CarnotGroup::create({"r3", {3}, {}});
  Rng rng = make_rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vector p = random_box_point(rng, *G, 5.0), q = random_box_point(rng, *G, 5.0);
    CHECK(G->multiply(p, q) == p + q);
  }
}

TEST_CASE("identity, inverse and dilation") {
  for (auto G : {heis(), engel()}) {
    Rng rng = make_rng(4);
    for (int i = 0; i < 200; ++i) {
      const Vector p = random_box_point(rng, *G, 2.0), q = random_box_point(rng, *G, 2.0);
      CHECK(G->multiply(p, G->inverse(p)) == G->identity());
      CHECK(G->multiply(p, G->identity()) == p);
      CHECK(G->multiply(G->identity(), p) == p);
      const double lam = uniform(rng, 0.2, 5.0);
      const Vector a = G->dilate(lam, G->multiply(p, q));
      const Vector b = G->multiply(G->dilate(lam, p), G->dilate(lam, q));
      CHECK(max_abs(a - b) < 1e-12 * std::max(1.0, max_abs(a)));
      // delta_a delta_b = delta_{ab}, exact for powers of two.
      CHECK(G->dilate(0.5, G->dilate(4.0, p)) == G->dilate(2.0, p));
    }
    CHECK_THROWS_AS(G->dilate(0.0, G->identity()), DomainError);
  }
}

TEST_CASE("correction term: triangular, horizontal-free, homogeneous") {
  auto G = engel();
  Rng rng = make_rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vector p = random_box_point(rng, *G), q = random_box_point(rng, *G);
    const Vector Q = G->correction(p, q);
    CHECK(Q[0] == 0.0);
    CHECK(Q[1] == 0.0);
    CHECK(max_abs(G->multiply(p, q) - p - q - Q) < 1e-15);
    Vector p2 = p;
    p2[3] += 1.0;
    const Vector Q2 = G->correction(p2, q);
    for (int k = 0; k < 3; ++k) CHECK(Q2[static_cast<std::size_t>(k)] == Q[static_cast<std::size_t>(k)]);
    const Vector Qm = G->correction(G->inverse(q), G->inverse(p));
    CHECK(max_abs(Q + Qm) < 1e-15);
    const Vector Ql = G->correction(G->dilate(2.0, p), G->dilate(2.0, q));
    CHECK(Ql == G->dilate(2.0, Q));
  }
}

TEST_CASE("product bound dominates products") {
  auto G = engel();
  Rng rng = make_rng(6);
  for (int i = 0; i < 200; ++i) {
    const Vector p = random_box_point(rng, *G, 3.0), q = random_box_point(rng, *G, 3.0);
    Vector pa = p, qa = q;
    for (auto& x : pa) x = std::fabs(x);
    for (auto& x : qa) x = std::fabs(x);
    const Vector b = G->product_bound(pa, qa);
    const Vector pq = G->multiply(p, q);
    for (std::size_t k = 0; k < pq.size(); ++k) CHECK(std::fabs(pq[k]) <= b[k] * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("quad and double products agree") {
  auto G = engel();
  Rng rng = make_rng(7);
  const Vector p = random_box_point(rng, *G), q = random_box_point(rng, *G);
  const QVector pq = G->multiply(p.cast<Quad>(), q.cast<Quad>());
  CHECK(max_abs(pq.cast<double>() - G->multiply(p, q)) < 1e-15);
}

TEST_CASE("group points refuse mixed groups") {
  auto G = heis(), H = engel();
  GroupPoint a(G, Vector{1, 2, 3});
  GroupPoint b(H, Vector{1, 2, 3, 4});
  CHECK_THROWS_AS(a * b, SpecMismatch);
  CHECK_THROWS_AS(GroupPoint(G, Vector{1, 2}), SpecMismatch);
  CHECK((a * a.inverse()).coords() == G->identity());
}
