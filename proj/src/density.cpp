#include "carnot/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "carnot/parallel.hpp"

namespace carnot {

WeightedCloud::WeightedCloud(HomogeneousNorm norm, PointCloud points, std::vector<double> weights, double cell_radius)
    : weights_(std::move(weights)) {
  if (weights_.size() != points.size()) throw DomainError("one weight per point is required");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weights must be positive and finite");
    total_ += w;
  }
  index_ = std::make_shared<SpatialIndex>(std::move(norm), std::move(points), cell_radius);
}

WeightedCloud::WeightedCloud(HomogeneousNorm norm, PointCloud points, double cell_radius)
    : WeightedCloud(std::move(norm), points, std::vector<double>(points.size(), 1.0), cell_radius) {}

double WeightedCloud::ball_mass(const Vector& x, double r) const {
  double m = 0.0;
  index_->visit_ball(x, r, [&](std::size_t i, double) { m += weights_[i]; });
  return m;
}

double WeightedCloud::resolution_floor(std::size_t sample, std::uint64_t seed) const {
  const std::size_t n = size();
  if (n < 2) throw DomainError("resolution floor needs at least two points");
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  if (sample < n) {
    Rng rng = make_rng(seed, 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(sample);
  }
  std::vector<double> nn(ids.size());
  parallel_chunks(ids.size(), 256, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const Vector p = points().point(ids[k]);
      double r = index_->cell_radius();
      double best = std::numeric_limits<double>::infinity();
      while (!std::isfinite(best)) {
        index_->visit_ball(p, r, [&](std::size_t i, double d) {
          if (i != ids[k]) best = std::min(best, d);
        });
        r *= 2.0;
      }
      nn[k] = best;
    }
  });
  std::nth_element(nn.begin(), nn.begin() + static_cast<long>(nn.size() / 2), nn.end());
  return 5.0 * nn[nn.size() / 2];
}

std::vector<double> geometric_radii(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("geometric radii need 0 < lo < hi and count >= 2");
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) r[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return r;
}

namespace {

// (distance, weight) pairs within r, sorted, with running mass.
struct MassProfile {
  std::vector<double> dist;
  std::vector<double> cumulative;

  double mass(double r) const {
    const auto it = std::upper_bound(dist.begin(), dist.end(), r);
    const auto k = it - dist.begin();
    return k == 0 ? 0.0 : cumulative[static_cast<std::size_t>(k - 1)];
  }
};

MassProfile profile(const WeightedCloud& cloud, const Vector& x, double r) {
  std::vector<std::pair<double, double>> dw;
  cloud.index().visit_ball(x, r, [&](std::size_t i, double d) { dw.emplace_back(d, cloud.weights()[i]); });
  std::sort(dw.begin(), dw.end());
  MassProfile p;
  double acc = 0.0;
  for (const auto& [d, w] : dw) {
    acc += w;
    p.dist.push_back(d);
    p.cumulative.push_back(acc);
  }
  return p;
}

void check_radii(const std::vector<double>& radii) {
  if (radii.size() < 2) throw DomainError("need at least two radii");
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (!(radii[k] > 0.0) || (k && !(radii[k] > radii[k - 1]))) throw DomainError("radii must be positive and increasing");
  const double q = radii[1] / radii[0];
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (std::fabs(radii[k] / radii[k - 1] / q - 1.0) > 1e-6) throw DomainError("radii must be geometric");
  if (radii.back() / radii.front() < 1000.0 * (1.0 - 1e-9)) throw DomainError("radii must span three decades");
}

}  // namespace

DensityEstimate density_estimates(const WeightedCloud& cloud, const Vector& x, const std::vector<double>& radii,
                                  double Q, double floor) {
  check_radii(radii);
  if (radii.back() < floor) {
    std::ostringstream os;
    os << "every radius is below the resolution floor " << floor;
    throw DomainError(os.str());
  }
  DensityEstimate est;
  est.floor = floor;
  const MassProfile prof = profile(cloud, x, radii.back());
  const double top = radii.back();
  for (int k = 0;; ++k) {
    const double hi = top * std::pow(10.0, -k) * (1.0 + 1e-12);
    const double lo = top * std::pow(10.0, -k - 1) * (1.0 + 1e-12);
    if (hi < floor || hi < radii.front()) break;
    DecadeRow row;
    row.r_lo = std::max(lo, floor);
    row.r_hi = std::min(hi, top);
    row.theta_lower = std::numeric_limits<double>::infinity();
    for (double r : radii) {
      if (r <= lo || r > hi || r < floor) continue;
      const double t = prof.mass(r) / std::pow(r, Q);
      row.theta_lower = std::min(row.theta_lower, t);
      row.theta_upper = std::max(row.theta_upper, t);
      ++row.radii;
    }
    if (row.radii > 0) est.decades.push_back(row);
  }
  if (est.decades.empty()) throw DomainError("no radius at or above the resolution floor");
  est.theta_lower = est.decades.back().theta_lower;
  est.theta_upper = est.decades.back().theta_upper;
  if (est.decades.size() >= 2 && est.decades[0].theta_upper > 0.0)
    est.top_decade_ratio = est.decades[1].theta_upper / est.decades[0].theta_upper;
  return est;
}

std::vector<bool> ahlfors_set(const WeightedCloud& cloud, double l, double R, double Q,
                              const std::vector<double>& radii, double floor,
                              const std::vector<std::size_t>& points_to_test) {
  if (!(l >= 1.0)) throw DomainError("Ahlfors constant l must be at least 1");
  std::vector<double> used;
  for (double r : radii)
    if (r > floor && r < R) used.push_back(r);
  std::vector<bool> mask(cloud.size(), false);
  std::vector<char> ok(points_to_test.size(), 0);
  parallel_chunks(points_to_test.size(), 64, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const Vector x = cloud.points().point(points_to_test[k]);
      if (used.empty()) {
        ok[k] = 1;
        continue;
      }
      const MassProfile prof = profile(cloud, x, used.back());
      bool pass = true;
      for (double r : used) {
        const double m = prof.mass(r), rq = std::pow(r, Q);
        if (m < rq / l || m > l * rq) {
          pass = false;
          break;
        }
      }
      ok[k] = pass ? 1 : 0;
    }
  });
  for (std::size_t k = 0; k < points_to_test.size(); ++k) mask[points_to_test[k]] = ok[k] != 0;
  return mask;
}

CoverageGrid::CoverageGrid(HomogeneousNorm norm, double eta) : norm_(std::move(norm)), eta_(eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("coverage grid side must lie in (0, 1)");
  const CarnotGroup& g = *norm_.group();
  const int n = g.dim();
  double cells = 1.0;
  for (int i = 0; i < n; ++i) {
    const int j = g.algebra().degree(i);
    side_.push_back(std::pow(eta, j));
    const double b = std::pow(1.0 / norm_.epsilon(j), j);
    const auto lo = static_cast<std::int64_t>(std::floor(-b / side_[i]));
    const auto hi = static_cast<std::int64_t>(std::floor(b / side_[i]));
    lo_.push_back(lo);
    extent_.push_back(hi - lo + 1);
    cells *= static_cast<double>(hi - lo + 1);
  }
  if (cells > 5e7) throw DomainError("coverage grid too fine");
  reference_.assign(static_cast<std::size_t>(cells), -1);
  long next = 0;
  std::vector<std::int64_t> k(static_cast<std::size_t>(n), 0);
  for (std::size_t c = 0; c < reference_.size(); ++c) {
    std::size_t rest = c;
    Vector center(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      k[i] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(extent_[i]));
      rest /= static_cast<std::size_t>(extent_[i]);
      center[i] = (static_cast<double>(lo_[i] + k[i]) + 0.5) * side_[i];
    }
    if (norm_(center) <= 1.0) reference_[c] = next++;
  }
  reference_count_ = static_cast<std::size_t>(next);
}

long CoverageGrid::cell_of(const Vector& u) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < side_.size(); ++i) {
    const auto k = static_cast<std::int64_t>(std::floor(u[i] / side_[i])) - lo_[i];
    if (k < 0 || k >= extent_[i]) return -1;
    c = c * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(k);
  }
  return reference_[c];
}

namespace {

std::size_t count_reference(const CoverageGrid& grid) { return grid.reference_cells(); }

// Coverage at each radius in `radii` (all < R) for one centre, given the
// images of its neighbours within the largest radius.
DcResult coverage_of(const CoverageGrid& grid, const CarnotGroup& target, const Vector& fx,
                     const std::vector<std::pair<double, Vector>>& neighbours, double beta,
                     const std::vector<double>& radii, double eps) {
  DcResult res;
  const std::size_t total = count_reference(grid);
  std::vector<char> hit(total);
  for (double r : radii) {
    std::fill(hit.begin(), hit.end(), 0);
    std::size_t covered = 0;
    const double scale = 1.0 / (beta * r);
    for (const auto& [d, fy] : neighbours) {
      if (d > r) break;
      const Vector u = target.dilate(scale, target.difference(fx, fy));
      if (grid.norm()(u) > 1.0) continue;
      const long id = grid.cell_of(u);
      if (id >= 0 && !hit[static_cast<std::size_t>(id)]) {
        hit[static_cast<std::size_t>(id)] = 1;
        ++covered;
      }
    }
    const double frac = static_cast<double>(covered) / static_cast<double>(total);
    res.min_coverage = std::min(res.min_coverage, frac);
    ++res.radii_tested;
  }
  res.member = res.min_coverage >= 1.0 - eps;
  return res;
}

std::vector<std::pair<double, Vector>> neighbour_images(const WeightedCloud& cloud, const Vector& x, double r,
                                                        const std::function<Vector(std::size_t)>& image) {
  std::vector<std::pair<double, std::size_t>> nb;
  cloud.index().visit_ball(x, r, [&](std::size_t i, double d) { nb.emplace_back(d, i); });
  std::sort(nb.begin(), nb.end());
  std::vector<std::pair<double, Vector>> out;
  out.reserve(nb.size());
  for (const auto& [d, i] : nb) out.emplace_back(d, image(i));
  return out;
}

void check_grid(const CoverageGrid& grid) {
  if (grid.reference_cells() < 100) {
    std::ostringstream os;
    os << "coverage grid has " << grid.reference_cells() << " reference cells, need at least 100";
    throw DomainError(os.str());
  }
}

}  // namespace

DcResult dc_membership(const WeightedCloud& cloud, const MapSampler& phi, const CoverageGrid& grid, std::size_t x,
                       const DcParams& prm) {
  check_grid(grid);
  if (!(prm.beta > 0.0 && prm.beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  if (!(prm.eps > 0.0 && prm.eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
  require_same_group(*phi.target, *grid.norm().group());
  std::vector<double> radii;
  for (double r : prm.radii)
    if (r < prm.R) radii.push_back(r);
  std::sort(radii.begin(), radii.end());
  if (radii.empty()) return DcResult{true, 1.0, 0};
  const Vector px = cloud.points().point(x);
  const auto nb = neighbour_images(cloud, px, radii.back(),
                                   [&](std::size_t i) { return phi(cloud.points().point(i)); });
  return coverage_of(grid, *phi.target, phi(px), nb, prm.beta, radii, prm.eps);
}

DavidReport david_fraction(const WeightedCloud& cloud, const MapSampler& phi, const DavidOptions& opt) {
  const bool same = phi.target->same_as(*cloud.norm().group());
  CoverageGrid grid(same ? cloud.norm() : HomogeneousNorm::unit(phi.target), opt.eta);
  check_grid(grid);
  const std::size_t n = cloud.size();
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  if (opt.evaluation_points > 0 && opt.evaluation_points < n) {
    Rng rng = make_rng(opt.seed, 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(opt.evaluation_points);
    std::sort(ids.begin(), ids.end());
  }
  std::vector<Vector> images(n);
  parallel_chunks(n, 4096, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) images[i] = phi(cloud.points().point(i));
  });
  double rmax = 0.0;
  for (double r : opt.radii) rmax = std::max(rmax, r);

  DavidReport rep;
  rep.reference_cells = grid.reference_cells();
  rep.evaluated = ids.size();
  rep.evaluated_points = ids;
  rep.best_coverage.assign(ids.size(), 0.0);
  std::vector<char> pass(ids.size(), 0);
  parallel_chunks(ids.size(), 16, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t x = ids[k];
      const auto nb = neighbour_images(cloud, cloud.points().point(x), rmax, [&](std::size_t i) { return images[i]; });
      double best = 0.0;
      bool ok = false;
      for (double beta : opt.betas)
        for (double R : opt.Rs) {
          std::vector<double> radii;
          for (double r : opt.radii)
            if (r < R) radii.push_back(r);
          std::sort(radii.begin(), radii.end());
          if (radii.empty()) {
            best = 1.0;
            ok = true;
            continue;
          }
          const DcResult res = coverage_of(grid, *phi.target, images[x], nb, beta, radii, opt.eps);
          best = std::max(best, res.min_coverage);
          ok = ok || res.member;
        }
      rep.best_coverage[k] = best;
      pass[k] = ok ? 1 : 0;
    }
  });
  double wp = 0.0, wt = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    wt += cloud.weights()[ids[k]];
    if (pass[k]) wp += cloud.weights()[ids[k]];
  }
  rep.fraction = wt > 0.0 ? wp / wt : 0.0;
  return rep;
}

MapSampler identity_map(GroupPtr group) {
  MapSampler m;
  m.source = group;
  m.target = group;
  m.eval = [](const Vector& x) { return x; };
  m.lipschitz = 1.0;
  return m;
}

PointCloud uniform_ball_cloud(const HomogeneousNorm& norm, double radius, std::size_t n, std::uint64_t seed) {
  const CarnotGroup& g = *norm.group();
  const int d = g.dim();
  std::vector<double> half(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const int j = g.algebra().degree(i);
    half[i] = std::pow(radius / norm.epsilon(j), j);
  }
  PointCloud cloud(d);
  cloud.reserve(n);
  Rng rng = make_rng(seed, 0);
  while (cloud.size() < n) {
    Vector p(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) p[i] = uniform(rng, -half[i], half[i]);
    if (norm(p) <= radius) cloud.push_back(p);
  }
  return cloud;
}

PointCloud vertical_axis_cloud(const CarnotGroup& group, double h, std::size_t n, std::uint64_t seed) {
  PointCloud cloud(group.dim());
  cloud.reserve(n);
  Rng rng = make_rng(seed, 0);
  for (std::size_t k = 0; k < n; ++k) {
    Vector p(static_cast<std::size_t>(group.dim()));
    p[group.dim() - 1] = uniform(rng, -h, h);
    cloud.push_back(p);
  }
  return cloud;
}

}  // namespace carnot
