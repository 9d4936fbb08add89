#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "carnot/norm.hpp"

namespace carnot {

/// Points of a group stored row-major, `dim` doubles each.
struct PointCloud {
  int dim = 0;
  std::vector<double> data;

  PointCloud() = default;
  explicit PointCloud(int d) : dim(d) {}
  std::size_t size() const { return dim ? data.size() / static_cast<std::size_t>(dim) : 0; }
  Vector point(std::size_t i) const;
  void push_back(const Vector& p);
  void reserve(std::size_t n) { data.reserve(n * static_cast<std::size_t>(dim)); }
};

/// Hash grid over exponential coordinates with anisotropic cells of side
/// cell_radius^j on stratum j. Ball queries visit the coordinate box that
/// contains B(x, r), obtained from the BCH remainder bound. Immutable after
/// construction, so queries may run concurrently.
class SpatialIndex {
 public:
  SpatialIndex(HomogeneousNorm norm, PointCloud cloud, double cell_radius);

  const PointCloud& cloud() const { return cloud_; }
  const HomogeneousNorm& norm() const { return norm_; }
  std::size_t size() const { return cloud_.size(); }
  double cell_radius() const { return cell_radius_; }

  /// Calls f(index, distance) for every point with d(x, p) <= r.
  template <class F>
  void visit_ball(const Vector& x, double r, F&& f) const {
    const auto range = query_range(x, r);
    const int n = cloud_.dim;
    if (range_volume(range) > 2.0 * static_cast<double>(cells_.size()) + 16.0) {
      for (std::size_t idx = 0; idx < cloud_.size(); ++idx) {
        const double d = norm_.distance(x, cloud_.point(idx));
        if (d <= r) f(idx, d);
      }
      return;
    }
    Key key{};
    for (int i = 0; i < n; ++i) key[i] = range.first[i];
    for (;;) {
      auto it = cells_.find(key);
      if (it != cells_.end()) {
        for (std::uint32_t k = it->second.first; k < it->second.second; ++k) {
          const std::size_t idx = order_[k];
          const double d = norm_.distance(x, cloud_.point(idx));
          if (d <= r) f(idx, d);
        }
      }
      int i = 0;
      for (; i < n; ++i) {
        if (++key[i] <= range.second[i]) break;
        key[i] = range.first[i];
      }
      if (i == n) break;
    }
  }

  std::size_t count_in_ball(const Vector& x, double r) const;
  /// Distances of all points within r, ascending.
  std::vector<double> distances_within(const Vector& x, double r) const;
  /// Nearest point within r, if any: (index, distance).
  std::optional<std::pair<std::size_t, double>> nearest(const Vector& x, double r) const;

  /// Number of cells a query of radius r at x would visit.
  std::size_t cells_visited(const Vector& x, double r) const;

 private:
  using Key = std::array<std::int32_t, kMaxDim>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  using Range = std::pair<Key, Key>;

  Key cell_of(const Vector& p) const;
  Range query_range(const Vector& x, double r) const;
  double range_volume(const Range& r) const;

  HomogeneousNorm norm_;
  PointCloud cloud_;
  double cell_radius_;
  std::vector<double> side_;
  std::vector<std::uint32_t> order_;
  std::unordered_map<Key, std::pair<std::uint32_t, std::uint32_t>, KeyHash> cells_;
};

/// Two-sided Hausdorff distance under the norm's metric.
double hausdorff_distance(const HomogeneousNorm& norm, const PointCloud& a, const PointCloud& b);

}  // namespace carnot
