#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carnot/decomposition.hpp"
#include "carnot/spatial_index.hpp"

namespace carnot {

/// Self-similar tile T = U_j p_j . delta_{1/2}(T) with 2^Q centers.
struct TileSpec {
  GroupPtr group;
  std::vector<Vector> centers;
  std::string provenance;

  /// Throws DomainError unless there are exactly 2^Q centers of the right size.
  void validate() const;
};

/// cloud_k = U_j p_j . delta_{1/2}(cloud_{k-1}), cloud_0 = {0}. Points of the
/// j-th piece occupy the j-th contiguous block.
PointCloud attractor(const TileSpec& tile, int depth);

/// Each address evaluated on its own as p_{w_1} . delta_{1/2}(p_{w_2} .
/// delta_{1/2}(... p_{w_k})), innermost letter first.
PointCloud attractor_nested(const TileSpec& tile, int depth);

/// The same points evaluated left to right as
/// p_{w_1} . delta_{1/2}(p_{w_2}) ... delta_{2^{1-k}}(p_{w_k}).
PointCloud attractor_by_address(const TileSpec& tile, int depth);

struct OverlapCount {
  int depth = 0;
  std::size_t occupied_cells = 0;
  std::size_t shared_cells = 0;
  double fraction = 0.0;
};

/// Box count at scale r = grid_resolution * 2^{-depth}: cells (side r^j on
/// stratum j) holding depth-`depth` points from two or more first-level
/// pieces, over all occupied cells. Streams addresses without storing them.
OverlapCount overlap_count(const TileSpec& tile, int depth, double grid_resolution);

struct TileOptions {
  int depth = 6;
  double grid_resolution = 2.0;
  /// Clouds are materialized at depth min(depth, cloud_depth_cap).
  int cloud_depth_cap = 5;
  int lambda_radii = 200;
  int lambda_probes = 64;
  std::size_t diam_points = 4096;
  std::uint64_t seed = 3;
};

struct TileReport {
  int depth = 0;
  int cloud_depth = 0;
  /// Hausdorff distance between the recursive cloud and the per-address
  /// nested evaluation.
  double self_similarity_defect = 0.0;
  /// Same against left-to-right prefix products; rounding level unless the
  /// centers are dyadic.
  double prefix_defect = 0.0;
  double overlap_fraction = 0.0;
  std::size_t occupied_cells = 0;
  std::size_t shared_cells = 0;
  double lambda_emp = 0.0;
  double diam_emp = 0.0;
  /// Every point of T lies within this distance of the cloud.
  double hull_tolerance = 0.0;
  /// max ||p|| over the cloud.
  double radius_emp = 0.0;
};

TileReport verify_tile(const TileSpec& tile, const HomogeneousNorm& norm, const TileOptions& options = {});

/// Largest tested r such that every probe on every tested sphere of radius
/// <= r lies within `tolerance` of the indexed cloud.
double interior_radius(const SpatialIndex& index, double tolerance, double max_radius, int radii, int probes,
                       std::uint64_t seed);

/// Max pairwise distance over the deepest cloud with at most max_points points.
double tile_diameter(const TileSpec& tile, const HomogeneousNorm& norm, std::size_t max_points);

struct TranslatedTile {
  TileSpec tile;
  double tau_norm = 0.0;
  /// lambda_emp / 4 - ||tau||; negative means the interior margin is lost.
  double margin = 0.0;
  bool warning = false;
};

/// Centers tau . p_j . delta_{1/2}(tau)^{-1}, whose attractor is tau . T.
TranslatedTile translate_tile(const TileSpec& tile, const Vector& tau, const HomogeneousNorm& norm, double lambda_emp);

struct ReachabilityParams {
  double xi = 0.1;
  /// Bound max |s_k| <= c0 ||y^{-1} p_j||.
  double c0 = 1.0;
  double rho = 0.05;
  int samples_per_center = 32;
  std::uint64_t seed = 17;
};

struct CenterReach {
  int center = 0;
  int trials = 0;
  int passed = 0;
  int decomposition_failures = 0;
  double min_nonzero = 0.0;
  double max_ratio = 0.0;
};

struct ReachabilityReport {
  std::vector<CenterReach> centers;
  int trials = 0;
  int passed = 0;
  double pass_fraction = 0.0;
  /// Smallest nonzero |s_k| seen, and its margin over xi.
  double min_nonzero = 0.0;
  double xi_margin = 0.0;
  double max_ratio = 0.0;
  double c0_margin = 0.0;
  /// Smallest nonzero |s_k| of each trial, in trial order.
  std::vector<double> trial_min_nonzero;
};

/// Decomposes y^{-1} p_j for y sampled in B(0, rho), cycling through the
/// candidate bases, and checks min{|s_k| : s_k != 0} > xi and
/// max |s_k| <= c0 ||y^{-1} p_j|| on the merged word.
ReachabilityReport reachability_check(const TileSpec& tile, const Decomposer& decomposer,
                                      const std::vector<HorizontalBasis>& bases, const ReachabilityParams& params);

/// A point of B(0, rho) with volume-uniform radial law.
Vector sample_ball(const HomogeneousNorm& norm, double rho, Rng& rng);

}  // namespace carnot
