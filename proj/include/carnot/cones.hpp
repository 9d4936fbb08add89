#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "carnot/fragment.hpp"

namespace carnot {

/// C(e, sigma) = { x : <x, e> >= (1 - sigma^2) |x| } in V_1.
struct Cone {
  Vector axis;
  double sigma = 0.0;

  /// Requires |axis| = 1 within 1e-12 and sigma >= 0.
  Cone(Vector axis, double sigma);
  static Cone from_direction(const Vector& direction, double sigma);
  /// Angle between the axis and the boundary rays.
  double half_angle() const;
};

/// x = 0 belongs to every cone unless `strict` excludes it.
bool in_cone(const Vector& x, const Cone& c, bool strict = false);

struct CCurveResult {
  bool ok = true;
  /// Sample indices (i, j), i < j, whose pi_1 increment leaves C \ {0}.
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

/// Checks pi_1(gamma(t_j)) - pi_1(gamma(t_i)) in C \ {0} for all i < j.
CCurveResult is_C_curve(const Fragment& gamma, const Cone& c);

struct XiResult {
  bool separated = false;
  /// inf over lambda != 0 of |sum lambda_i v_i| / max_i |lambda_i v_i|.
  double min_ratio = 0.0;
};

/// Zero vectors are ignored. The infimum is computed exactly: on each face
/// lambda_k |v_k| = 1 of the sup-sphere the ratio is the distance from
/// -u_k to a box-shaped zonotope, a convex problem solved by coordinate
/// descent.
XiResult xi_separated(const std::vector<Vector>& vectors, double xi);

/// Separation of cones: min of the ratio over selections of axis and
/// boundary directions (the ratio is invariant under scaling each vector).
XiResult cones_xi_separated(const std::vector<Cone>& cones, double xi, int boundary_samples = 64);

struct RefinedCone {
  std::size_t parent;
  Cone cone;
};

/// Covers each parent cap by cones of opening 1/l whose axes lie in the
/// parent; the parent axis is always one of them.
std::vector<RefinedCone> refine_cone_cover(const std::vector<Cone>& parents, int l);

struct CoverCheck {
  bool covered = true;
  bool axes_in_parent = true;
  std::size_t samples = 0;
  /// Smallest over samples of max over children of <x,w> - (1-alpha^2).
  double worst_margin = 0.0;
};

CoverCheck verify_cone_cover(const std::vector<Cone>& parents, const std::vector<RefinedCone>& cover,
                             std::size_t samples_per_parent = 4000, std::uint64_t seed = 3);

}  // namespace carnot
