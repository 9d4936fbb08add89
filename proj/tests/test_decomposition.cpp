#include "doctest.h"

#include <cmath>

#include "carnot/decomposition.hpp"
#include "carnot/sampling.hpp"

using namespace carnot;

namespace {

GroupPtr heis() { return CarnotGroup::create({"heisenberg1", {2, 1}, {{1, 2, 3, 1.0}}}); }
GroupPtr engel() { return CarnotGroup::create({"engel", {2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}}}); }

// Product in H^1 written out by hand.
Vector heis_mul(const Vector& p, const Vector& q) {
  return Vector{p[0] + q[0], p[1] + q[1], p[2] + q[2] + 0.5 * (p[0] * q[1] - p[1] * q[0])};
}

}  // namespace

TEST_CASE("words evaluate to the hand-written product") {
  auto G = heis();
  const auto B = HorizontalBasis::standard(*G);
  const Vector w = evaluate_word(*G, B, {1, 2, 1, 2}, {0.5, -1.5, 2.0, 0.25});
  Vector ref = G->identity();
  ref = heis_mul(ref, Vector{0.5, 0, 0});
  ref = heis_mul(ref, Vector{0, -1.5, 0});
  ref = heis_mul(ref, Vector{2.0, 0, 0});
  ref = heis_mul(ref, Vector{0, 0.25, 0});
  CHECK(max_abs(w - ref) < 1e-15);
  CHECK_THROWS_AS(evaluate_word(*G, B, {1, 3}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(evaluate_word(*G, B, {1}, {1.0, 1.0}), DomainError);
}

TEST_CASE("commutator of the standard letters") {
  auto G = heis();
  const auto B = HorizontalBasis::standard(*G);
  const Vector c = evaluate_word(*G, B, {1, 2, 1, 2}, {1.0, 1.0, -1.0, -1.0});
  CHECK(max_abs(c - Vector{0.0, 0.0, 1.0}) < 1e-12);
}

TEST_CASE("basis validation") {
  auto G = heis();
  CHECK_THROWS_AS(HorizontalBasis(*G, {Vector{1, 0}, Vector{2, 0}}), DomainError);
  CHECK_THROWS_AS(HorizontalBasis(*G, {Vector{1, 0}}), DomainError);
  CHECK_THROWS_AS(HorizontalBasis(*G, {Vector{1, 0}, Vector{0, 0}}), DomainError);
  const HorizontalBasis b(*G, {Vector{3, 0}, Vector{1, 1}});
  CHECK(euclidean_norm(b.vectors()[1]) == doctest::Approx(1.0));
  CHECK(b.letter(1).size() == 3);
}

TEST_CASE("flow composition vanishes at the anchor") {
  auto G = engel();
  const auto B = HorizontalBasis::standard(*G);
  const FlowComposition F(G, B, {1, 2, 1, 2}, {0.3, -0.7, 1.1, 0.4});
  CHECK(max_abs(F({0.3, -0.7, 1.1, 0.4})) < 1e-15);
  const auto J = F.jacobian({0.3, -0.7, 1.1, 0.4});
  CHECK(J.rows() == 4);
  CHECK(J.cols() == 4);
}

TEST_CASE("matrix helpers") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(2, 2) = 1e-3;
  CHECK(condition_number(m) == doctest::Approx(1e3));
  CHECK(numerical_rank(m) == 3);
  m(2, 2) = 1e-12;
  CHECK(numerical_rank(m) == 2);
  CHECK(numerical_rank(Eigen::MatrixXd::Zero(2, 2)) == 0);
}

TEST_CASE("round trip on several groups") {
  for (const auto& G : {heis(), engel(), CarnotGroup::create({"r2", {2}, {}})}) {
    const HomogeneousNorm n = HomogeneousNorm::unit(G);
    const Decomposer d(G, HorizontalBasis::standard(*G), n);
    Rng rng = make_rng(4, 0);
    double worst_ratio = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double r = log_uniform(rng, 1e-2, 10.0);
      const Vector v = G->dilate(r, n.sample_unit_sphere(rng));
      const auto w = d.decompose(v);
      CHECK(w.size() == static_cast<std::size_t>(2 * G->dim()));
      const Vector back = evaluate_word(*G, d.basis(), w.pattern, w.scalars);
      CHECK(max_abs(back - v) <= 1e-8 * std::max(1.0, max_abs(v)));
      CHECK(w.reconstruction_error == doctest::Approx(max_abs(back - v)).epsilon(1e-3).scale(1e-12));
      worst_ratio = std::max(worst_ratio, w.bound_ratio);
    }
    CHECK(worst_ratio < 1e3);
    const auto zero = d.decompose(G->identity());
    CHECK(zero.bound_ratio == 0.0);
  }
}

TEST_CASE("merging adjacent letters keeps the product") {
  auto G = heis();
  const auto B = HorizontalBasis::standard(*G);
  DecompositionWord w;
  w.pattern = {1, 1, 2, 2, 1};
  w.scalars = {0.5, 0.25, -1.0, 2.0, 0.125};
  const auto m = w.merged();
  CHECK(m.size() == w.size());
  CHECK(m.scalars[0] == 0.75);
  CHECK(m.scalars[1] == 1.0);
  CHECK(max_abs(evaluate_word(*G, B, m.pattern, m.scalars) - evaluate_word(*G, B, w.pattern, w.scalars)) < 1e-15);
  CHECK(w.entries().size() == 5);
}

TEST_CASE("another basis reuses the anchor") {
  auto G = heis();
  const HomogeneousNorm n = HomogeneousNorm::unit(G);
  const Decomposer d(G, HorizontalBasis::standard(*G), n);
  const Decomposer e = d.with_basis(HorizontalBasis(*G, {Vector{1, 1}, Vector{1, -1}}));
  CHECK(e.anchor().pattern == d.anchor().pattern);
  const Vector v{0.3, -0.2, 0.15};
  const auto w = e.decompose(v);
  CHECK(max_abs(evaluate_word(*G, e.basis(), w.pattern, w.scalars) - v) < 1e-10);
  CHECK_THROWS_AS(d.decompose(Vector{1.0, 2.0}), SpecMismatch);
}
