#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "carnot/pansu.hpp"
#include "carnot/spatial_index.hpp"

namespace carnot {

/// Atoms of a measure on a group, indexed for ball queries.
class WeightedCloud {
 public:
  /// Throws DomainError unless every weight is positive and finite.
  WeightedCloud(HomogeneousNorm norm, PointCloud points, std::vector<double> weights, double cell_radius);
  /// Unit weights.
  WeightedCloud(HomogeneousNorm norm, PointCloud points, double cell_radius);

  const PointCloud& points() const { return index_->cloud(); }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_; }
  std::size_t size() const { return weights_.size(); }
  const SpatialIndex& index() const { return *index_; }
  const HomogeneousNorm& norm() const { return index_->norm(); }

  double ball_mass(const Vector& x, double r) const;
  /// 5 x the median nearest-neighbour distance over up to `sample` points.
  double resolution_floor(std::size_t sample = 2000, std::uint64_t seed = 1) const;

 private:
  std::shared_ptr<SpatialIndex> index_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// r_k = lo * (hi/lo)^{k/(count-1)}.
std::vector<double> geometric_radii(double lo, double hi, int count);

struct DecadeRow {
  double r_lo = 0.0;
  double r_hi = 0.0;
  int radii = 0;
  double theta_lower = 0.0;
  double theta_upper = 0.0;
};

struct DensityEstimate {
  double theta_lower = 0.0;
  double theta_upper = 0.0;
  double floor = 0.0;
  /// Decades anchored at the largest radius, coarsest first, keeping only
  /// radii at or above the floor. The estimate comes from the last row.
  std::vector<DecadeRow> decades;
  /// theta_upper of the second-coarsest decade over that of the coarsest.
  double top_decade_ratio = 0.0;
};

/// min and max of mu(B(x, r)) / r^Q over the finest decade of radii above
/// the resolution floor. Radii must be increasing, geometric and span three
/// decades. Throws DomainError if every radius is below the floor.
DensityEstimate density_estimates(const WeightedCloud& cloud, const Vector& x, const std::vector<double>& radii,
                                  double Q, double floor);

/// Points x with l^{-1} r^Q <= mu(B(x, r)) <= l r^Q at every radius in
/// (floor, R). Only the listed points are tested; others stay false.
std::vector<bool> ahlfors_set(const WeightedCloud& cloud, double l, double R, double Q,
                              const std::vector<double>& radii, double floor,
                              const std::vector<std::size_t>& points_to_test);

/// Normalized grid for ball coverage: cells of side eta^j on stratum j in
/// the coordinates delta_{1/(beta r)}(phi(x)^{-1} phi(y)); the reference
/// cells are those whose centers lie in the closed unit ball.
class CoverageGrid {
 public:
  CoverageGrid(HomogeneousNorm target_norm, double eta);

  double eta() const { return eta_; }
  std::size_t reference_cells() const { return reference_count_; }
  /// Reference cell id of a normalized point, or -1.
  long cell_of(const Vector& u) const;
  const HomogeneousNorm& norm() const { return norm_; }

 private:
  HomogeneousNorm norm_;
  double eta_;
  std::vector<double> side_;
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> extent_;
  std::vector<long> reference_;  // dense cell number -> reference id or -1
  std::size_t reference_count_ = 0;
};

struct DcParams {
  double beta = 0.8;
  double eps = 0.5;
  double R = 0.5;
  /// Radii sampled below R.
  std::vector<double> radii;
};

struct DcResult {
  bool member = false;
  /// min over sampled r of the covered fraction.
  double min_coverage = 1.0;
  int radii_tested = 0;
};

/// Covered fraction of B(phi(x), beta r) by images of cloud points in
/// B(x, r), checked against 1 - eps at each sampled r < R. Throws
/// DomainError if the grid has fewer than 100 reference cells.
DcResult dc_membership(const WeightedCloud& cloud, const MapSampler& phi, const CoverageGrid& grid, std::size_t x,
                       const DcParams& params);

struct DavidOptions {
  double eps = 0.5;
  std::vector<double> betas{0.6, 0.8, 1.0};
  std::vector<double> Rs{0.3, 0.4, 0.6};
  std::vector<double> radii{0.25, 0.35, 0.5};
  double eta = 0.4;
  /// Points evaluated; 0 means all.
  std::size_t evaluation_points = 500;
  std::uint64_t seed = 9;
};

struct DavidReport {
  double fraction = 0.0;
  std::size_t evaluated = 0;
  std::size_t reference_cells = 0;
  /// Best (largest) min_coverage per evaluated point.
  std::vector<double> best_coverage;
  std::vector<std::size_t> evaluated_points;
};

/// Weight fraction of evaluated points in DC(beta, eps, R) for some grid
/// pair (beta, R).
DavidReport david_fraction(const WeightedCloud& cloud, const MapSampler& phi, const DavidOptions& options);

/// Identity chart of a group.
MapSampler identity_map(GroupPtr group);

/// n points uniform (Haar) in the closed ball B(0, radius).
PointCloud uniform_ball_cloud(const HomogeneousNorm& norm, double radius, std::size_t n, std::uint64_t seed);

/// n points uniform on the top-stratum axis segment {exp(t X_n) : |t| <= h}.
PointCloud vertical_axis_cloud(const CarnotGroup& group, double h, std::size_t n, std::uint64_t seed);

}  // namespace carnot
