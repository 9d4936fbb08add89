#include "doctest.h"

#include "carnot/algebra.hpp"
#include "carnot/error.hpp"

using namespace carnot;

namespace {

StratificationSpec heis() { return {"h", {2, 1}, {{1, 2, 3, 1.0}}}; }

}  // namespace

TEST_CASE("valid algebras pass validation") {
  CHECK(validate_stratification(heis()).ok());
  CHECK(validate_stratification({"engel", {2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}}}).ok());
  CHECK(validate_stratification({"r3", {3}, {}}).ok());
  // Both orientations given consistently.
  CHECK(validate_stratification({"h", {2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, -1.0}}}).ok());
}

TEST_CASE("each invariant violation is named") {
  SUBCASE("antisymmetry") {
    auto r = validate_stratification({"h", {2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, 1.0}}});
    CHECK(r.has("antisymmetry"));
  }
  SUBCASE("grading") {
    auto r = validate_stratification({"bad", {2, 1}, {{1, 2, 3, 1.0}, {1, 3, 2, 1.0}}});
    CHECK(r.has("grading"));
  }
  SUBCASE("generation") {
    auto r = validate_stratification({"bad", {2, 1}, {}});
    CHECK(r.has("generation"));
  }
  SUBCASE("so(3) brackets on a single stratum") {
    auto r = validate_stratification({"bad", {3}, {{1, 2, 3, 1.0}, {2, 3, 1, 1.0}, {3, 1, 2, 1.0}}});
    CHECK(r.has("grading"));
  }
}

TEST_CASE("jacobi failure detected") {
  // [X1,[X2,X3]] + [X3,[X1,X2]] = 2 X6 on (X1, X2, X3).
  StratificationSpec s{"j", {3, 2, 1}, {{1, 2, 4, 1.0}, {2, 3, 5, 1.0}, {1, 5, 6, 1.0}, {3, 4, 6, 1.0}}};
  auto r = validate_stratification(s);
  CHECK(r.has("jacobi"));
  CHECK_FALSE(r.has("grading"));
  // Flipping the last sign repairs it.
  s.brackets.back().c = -1.0;
  CHECK(validate_stratification(s).ok());
}

TEST_CASE("structural errors throw") {
  CHECK_THROWS_AS(validate_stratification({"e", {}, {}}), SpecError);
  CHECK_THROWS_AS(validate_stratification({"e", {2, 0}, {}}), SpecError);
  CHECK_THROWS_AS(validate_stratification({"e", {2, 1}, {{1, 2, 4, 1.0}}}), SpecError);
  CHECK_THROWS_AS(validate_stratification({"e", {17}, {}}), SpecError);
  CHECK_THROWS_AS(Algebra({"e", {2, 1}, {}}), SpecError);
}

TEST_CASE("homogeneous dimension") {
  CHECK(homogeneous_dimension({"r3", {3}, {}}) == 3);
  CHECK(homogeneous_dimension(heis()) == 4);
  CHECK(homogeneous_dimension({"h2", {4, 1}, {}}) == 6);
  CHECK(homogeneous_dimension({"engel", {2, 1, 1}, {}}) == 7);
  CHECK(homogeneous_dimension({"f", {3, 3}, {}}) == 9);
}

TEST_CASE("bracket is bilinear and antisymmetric") {
  Algebra a(heis());
  Vector u{1.5, -2.0, 0.25}, v{0.5, 3.0, -1.0};
  auto b = a.bracket(u, v);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == doctest::Approx(1.5 * 3.0 - (-2.0) * 0.5));
  auto c = a.bracket(v, u);
  CHECK(c[2] == -b[2]);
  CHECK(a.bracket(u, u)[2] == 0.0);
}

TEST_CASE("stratum helpers") {
  Algebra a({"engel", {2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}}});
  CHECK(a.dim() == 4);
  CHECK(a.stratum_offset(3) == 3);
  CHECK(a.degree(2) == 2);
  Vector v{1, 2, 3, 4};
  CHECK(a.project(v, 2) == Vector{0, 0, 3, 0});
  CHECK(a.stratum(v, 1) == Vector{1, 2});
  CHECK(a.horizontal(Vector{5, 6}) == Vector{5, 6, 0, 0});
  CHECK_THROWS_AS(a.horizontal(Vector{1}), SpecMismatch);
}

TEST_CASE("same_structure ignores names and orientation") {
  CHECK(same_structure(heis(), {"other", {2, 1}, {{2, 1, 3, -1.0}}}));
  CHECK_FALSE(same_structure(heis(), {"other", {2, 1}, {{1, 2, 3, 2.0}}}));
}
