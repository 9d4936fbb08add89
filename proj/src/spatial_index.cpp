#include "carnot/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace carnot {

Vector PointCloud::point(std::size_t i) const {
  Vector p(static_cast<std::size_t>(dim));
  const double* row = data.data() + i * static_cast<std::size_t>(dim);
  for (int k = 0; k < dim; ++k) p[k] = row[k];
  return p;
}

void PointCloud::push_back(const Vector& p) {
  if (static_cast<int>(p.size()) != dim) throw SpecMismatch("point has the wrong dimension");
  for (int k = 0; k < dim; ++k) data.push_back(p[k]);
}

std::size_t SpatialIndex::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int32_t v : k) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

SpatialIndex::SpatialIndex(HomogeneousNorm norm, PointCloud cloud, double cell_radius)
    : norm_(std::move(norm)), cloud_(std::move(cloud)), cell_radius_(cell_radius) {
  const auto& g = *norm_.group();
  if (cloud_.dim != g.dim()) throw SpecMismatch("cloud dimension does not match the group");
  if (!(cell_radius > 0.0) || !std::isfinite(cell_radius)) throw DomainError("cell radius must be positive");
  if (cloud_.size() >= std::numeric_limits<std::uint32_t>::max()) throw DomainError("cloud too large to index");
  for (int i = 0; i < g.dim(); ++i) side_.push_back(std::pow(cell_radius, g.algebra().degree(i)));

  const std::size_t n = cloud_.size();
  std::vector<Key> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = cell_of(cloud_.point(i));
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });
  cells_.reserve(n / 4 + 1);
  for (std::uint32_t b = 0; b < n;) {
    std::uint32_t e = b + 1;
    while (e < n && keys[order_[e]] == keys[order_[b]]) ++e;
    cells_.emplace(keys[order_[b]], std::make_pair(b, e));
    b = e;
  }
}

SpatialIndex::Key SpatialIndex::cell_of(const Vector& p) const {
  Key k{};
  for (int i = 0; i < cloud_.dim; ++i) {
    const double c = std::floor(p[i] / side_[i]);
    k[i] = static_cast<std::int32_t>(std::clamp(c, -2.0e9, 2.0e9));
  }
  return k;
}

SpatialIndex::Range SpatialIndex::query_range(const Vector& x, double r) const {
  const auto& g = *norm_.group();
  const auto& a = g.algebra();
  const int n = g.dim();
  Vector zb(static_cast<std::size_t>(n)), xa(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = a.degree(i);
    zb[i] = std::pow(r / norm_.epsilon(j), j);
    xa[i] = std::fabs(x[i]);
  }
  const Vector rb = g.bch().remainder_bound(xa, zb, [&a](const Vector& u, const Vector& v) { return a.bracket_bound(u, v); });
  Vector lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double b = (zb[i] + rb[i]) * (1.0 + 1e-12) + 1e-15 * (1.0 + xa[i]);
    lo[i] = x[i] - b;
    hi[i] = x[i] + b;
  }
  return {cell_of(lo), cell_of(hi)};
}

double SpatialIndex::range_volume(const Range& r) const {
  double v = 1.0;
  for (int i = 0; i < cloud_.dim; ++i) v *= static_cast<double>(r.second[i]) - static_cast<double>(r.first[i]) + 1.0;
  return v;
}

std::size_t SpatialIndex::cells_visited(const Vector& x, double r) const {
  const double v = range_volume(query_range(x, r));
  return v > 2.0 * static_cast<double>(cells_.size()) + 16.0 ? cells_.size() : static_cast<std::size_t>(v);
}

std::size_t SpatialIndex::count_in_ball(const Vector& x, double r) const {
  std::size_t c = 0;
  visit_ball(x, r, [&](std::size_t, double) { ++c; });
  return c;
}

std::vector<double> SpatialIndex::distances_within(const Vector& x, double r) const {
  std::vector<double> d;
  visit_ball(x, r, [&](std::size_t, double dist) { d.push_back(dist); });
  std::sort(d.begin(), d.end());
  return d;
}

std::optional<std::pair<std::size_t, double>> SpatialIndex::nearest(const Vector& x, double r) const {
  std::optional<std::pair<std::size_t, double>> best;
  visit_ball(x, r, [&](std::size_t i, double d) {
    if (!best || d < best->second || (d == best->second && i < best->first)) best = std::make_pair(i, d);
  });
  return best;
}

namespace {

double directed(const PointCloud& from, const SpatialIndex& to, double start) {
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Vector p = from.point(i);
    double r = std::max(start, worst);
    for (;;) {
      auto nn = to.nearest(p, r);
      if (nn) {
        worst = std::max(worst, nn->second);
        break;
      }
      r *= 2.0;
      if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const HomogeneousNorm& norm, const PointCloud& a, const PointCloud& b) {
  if (a.size() == 0 || b.size() == 0)
    return a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
  const double cell = 0.05;
  SpatialIndex ia(norm, a, cell), ib(norm, b, cell);
  return std::max(directed(a, ib, 1e-9), directed(b, ia, 1e-9));
}

}  // namespace carnot
