#include "carnot/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "carnot/parallel.hpp"

namespace carnot {

void TileSpec::validate() const {
  if (!group) throw DomainError("tile has no group");
  const int q = group->homogeneous_dimension();
  if (q >= 31) throw DomainError("homogeneous dimension too large for a tile");
  const std::size_t want = std::size_t{1} << q;
  if (centers.size() != want) {
    std::ostringstream os;
    os << "tile on " << group->name() << " needs 2^" << q << " = " << want << " centers, got " << centers.size();
    throw DomainError(os.str());
  }
  for (const auto& c : centers)
    if (static_cast<int>(c.size()) != group->dim()) throw SpecMismatch("tile center has the wrong dimension");
}

PointCloud attractor(const TileSpec& tile, int depth) {
  tile.validate();
  if (depth < 0) throw DomainError("depth must be nonnegative");
  const CarnotGroup& g = *tile.group;
  PointCloud cloud(g.dim());
  cloud.push_back(g.identity());
  for (int k = 1; k <= depth; ++k) {
    PointCloud next(g.dim());
    next.reserve(cloud.size() * tile.centers.size());
    std::vector<Vector> shrunk(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) shrunk[i] = g.dilate(0.5, cloud.point(i));
    for (const auto& p : tile.centers)
      for (const auto& q : shrunk) next.push_back(g.multiply(p, q));
    cloud = std::move(next);
  }
  return cloud;
}

namespace {

// levels[m][j] = delta_{2^{-m}}(p_j).
std::vector<std::vector<Vector>> dilated_centers(const TileSpec& tile, int depth) {
  const CarnotGroup& g = *tile.group;
  std::vector<std::vector<Vector>> levels(static_cast<std::size_t>(std::max(depth, 0)));
  for (int m = 0; m < depth; ++m)
    for (const auto& p : tile.centers) levels[m].push_back(g.dilate(std::ldexp(1.0, -m), p));
  return levels;
}

// Visits depth-k address points in lexicographic order: f(first_letter, point).
template <class F>
void for_each_address(const TileSpec& tile, int depth, F&& f) {
  const CarnotGroup& g = *tile.group;
  if (depth == 0) {
    f(0, g.identity());
    return;
  }
  const auto levels = dilated_centers(tile, depth);
  const std::size_t m = tile.centers.size();
  std::vector<Vector> prefix(static_cast<std::size_t>(depth) + 1);
  std::vector<std::size_t> digit(static_cast<std::size_t>(depth), 0);
  prefix[0] = g.identity();
  int level = 0;
  for (;;) {
    // descend from `level` to a leaf using the current digits
    for (int l = level; l < depth; ++l) prefix[l + 1] = g.multiply(prefix[l], levels[l][digit[l]]);
    f(static_cast<int>(digit[0]), prefix[depth]);
    int l = depth - 1;
    while (l >= 0 && ++digit[l] == m) digit[l--] = 0;
    if (l < 0) break;
    level = l;
  }
}

}  // namespace

PointCloud attractor_by_address(const TileSpec& tile, int depth) {
  tile.validate();
  if (depth < 0) throw DomainError("depth must be nonnegative");
  PointCloud cloud(tile.group->dim());
  for_each_address(tile, depth, [&](int, const Vector& p) { cloud.push_back(p); });
  return cloud;
}

PointCloud attractor_nested(const TileSpec& tile, int depth) {
  tile.validate();
  if (depth < 0) throw DomainError("depth must be nonnegative");
  const CarnotGroup& g = *tile.group;
  const std::size_t m = tile.centers.size();
  const double total = std::pow(static_cast<double>(m), depth);
  PointCloud cloud(g.dim());
  cloud.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digit(static_cast<std::size_t>(depth), 0);
  for (std::size_t a = 0; a < static_cast<std::size_t>(total); ++a) {
    std::size_t rest = a;
    for (int l = depth - 1; l >= 0; --l) {
      digit[l] = rest % m;
      rest /= m;
    }
    Vector x = g.identity();
    for (int l = depth - 1; l >= 0; --l) x = g.multiply(tile.centers[digit[l]], g.dilate(0.5, x));
    cloud.push_back(x);
  }
  return cloud;
}

OverlapCount overlap_count(const TileSpec& tile, int depth, double grid_resolution) {
  tile.validate();
  if (depth < 0) throw DomainError("depth must be nonnegative");
  if (!(grid_resolution > 0.0)) throw DomainError("grid resolution must be positive");
  const CarnotGroup& g = *tile.group;
  const int n = g.dim();
  const double r = grid_resolution * std::ldexp(1.0, -depth);
  std::vector<double> side(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) side[i] = std::pow(r, g.algebra().degree(i));

  std::vector<std::int64_t> lo(static_cast<std::size_t>(n), std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> hi(static_cast<std::size_t>(n), std::numeric_limits<std::int64_t>::min());
  auto cell = [&](const Vector& p, int i) { return static_cast<std::int64_t>(std::floor(p[i] / side[i])); };
  for_each_address(tile, depth, [&](int, const Vector& p) {
    for (int i = 0; i < n; ++i) {
      const auto c = cell(p, i);
      lo[i] = std::min(lo[i], c);
      hi[i] = std::max(hi[i], c);
    }
  });

  int label_bits = 0;
  while ((std::size_t{1} << label_bits) < tile.centers.size()) ++label_bits;
  std::vector<int> bits(static_cast<std::size_t>(n));
  int total = label_bits;
  for (int i = 0; i < n; ++i) {
    const auto span = static_cast<std::uint64_t>(hi[i] - lo[i]);
    int b = 0;
    while (b < 63 && (std::uint64_t{1} << b) <= span) ++b;
    bits[i] = b;
    total += b;
  }
  if (total > 64) throw DomainError("overlap grid too fine to pack cell keys into 64 bits");

  std::vector<std::uint64_t> keys;
  keys.reserve(static_cast<std::size_t>(std::pow(static_cast<double>(tile.centers.size()), depth)));
  for_each_address(tile, depth, [&](int label, const Vector& p) {
    std::uint64_t k = 0;
    for (int i = 0; i < n; ++i) k = (k << bits[i]) | static_cast<std::uint64_t>(cell(p, i) - lo[i]);
    keys.push_back((k << label_bits) | static_cast<std::uint64_t>(label));
  });
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  OverlapCount out;
  out.depth = depth;
  for (std::size_t b = 0; b < keys.size();) {
    std::size_t e = b + 1;
    while (e < keys.size() && (keys[e] >> label_bits) == (keys[b] >> label_bits)) ++e;
    ++out.occupied_cells;
    if (e - b >= 2) ++out.shared_cells;
    b = e;
  }
  out.fraction = out.occupied_cells ? static_cast<double>(out.shared_cells) / static_cast<double>(out.occupied_cells) : 0.0;
  return out;
}

double interior_radius(const SpatialIndex& index, double tolerance, double max_radius, int radii, int probes,
                       std::uint64_t seed) {
  const HomogeneousNorm& norm = index.norm();
  const CarnotGroup& g = *norm.group();
  if (!index.nearest(g.identity(), tolerance)) return 0.0;
  Rng rng = make_rng(seed, 0);
  std::vector<Vector> dirs;
  for (int k = 0; k < probes; ++k) dirs.push_back(norm.sample_unit_sphere(rng));
  double passed = 0.0;
  for (int i = 1; i <= radii; ++i) {
    const double r = max_radius * i / radii;
    for (const auto& u : dirs)
      if (!index.nearest(g.dilate(r, u), tolerance)) return passed;
    passed = r;
  }
  return passed;
}

double tile_diameter(const TileSpec& tile, const HomogeneousNorm& norm, std::size_t max_points) {
  tile.validate();
  int d = 0;
  while (std::pow(static_cast<double>(tile.centers.size()), d + 1) <= static_cast<double>(max_points)) ++d;
  const PointCloud c = attractor(tile, d);
  const std::size_t m = c.size();
  std::vector<Vector> pts(m);
  for (std::size_t i = 0; i < m; ++i) pts[i] = c.point(i);
  return parallel_reduce(
      m, 64, 0.0,
      [&](std::size_t, std::size_t b, std::size_t e) {
        double best = 0.0;
        for (std::size_t i = b; i < e; ++i)
          for (std::size_t j = i + 1; j < m; ++j) best = std::max(best, norm.distance(pts[i], pts[j]));
        return best;
      },
      [](double a, double b) { return std::max(a, b); });
}

TileReport verify_tile(const TileSpec& tile, const HomogeneousNorm& norm, const TileOptions& opt) {
  tile.validate();
  if (opt.depth < 4) throw DomainError("verify_tile needs depth >= 4");
  TileReport rep;
  rep.depth = opt.depth;
  rep.cloud_depth = std::min(opt.depth, opt.cloud_depth_cap);

  const PointCloud rec = attractor(tile, rep.cloud_depth);
  const PointCloud nested = attractor_nested(tile, rep.cloud_depth);
  rep.self_similarity_defect = rec.data == nested.data ? 0.0 : hausdorff_distance(norm, rec, nested);
  const PointCloud addr = attractor_by_address(tile, rep.cloud_depth);
  rep.prefix_defect = rec.data == addr.data ? 0.0 : hausdorff_distance(norm, rec, addr);

  const OverlapCount oc = overlap_count(tile, opt.depth, opt.grid_resolution);
  rep.overlap_fraction = oc.fraction;
  rep.occupied_cells = oc.occupied_cells;
  rep.shared_cells = oc.shared_cells;

  for (std::size_t i = 0; i < rec.size(); ++i) rep.radius_emp = std::max(rep.radius_emp, norm(rec.point(i)));
  const double scale = std::ldexp(1.0, -rep.cloud_depth);
  rep.hull_tolerance = 1.25 * scale * rep.radius_emp / (1.0 - scale);
  rep.diam_emp = tile_diameter(tile, norm, opt.diam_points);

  if (rep.hull_tolerance > 0.0) {
    SpatialIndex index(norm, rec, rep.hull_tolerance);
    rep.lambda_emp = interior_radius(index, rep.hull_tolerance, 0.5 * rep.diam_emp + rep.hull_tolerance,
                                     opt.lambda_radii, opt.lambda_probes, opt.seed);
  }
  return rep;
}

TranslatedTile translate_tile(const TileSpec& tile, const Vector& tau, const HomogeneousNorm& norm, double lambda_emp) {
  tile.validate();
  const CarnotGroup& g = *tile.group;
  if (static_cast<int>(tau.size()) != g.dim()) throw SpecMismatch("tau has the wrong dimension");
  TranslatedTile out;
  out.tile.group = tile.group;
  out.tile.provenance = tile.provenance;
  const Vector tail = g.inverse(g.dilate(0.5, tau));
  for (const auto& p : tile.centers) out.tile.centers.push_back(g.multiply(g.multiply(tau, p), tail));
  out.tau_norm = norm(tau);
  out.margin = lambda_emp / 4.0 - out.tau_norm;
  out.warning = out.margin <= 0.0;
  return out;
}

Vector sample_ball(const HomogeneousNorm& norm, double rho, Rng& rng) {
  const CarnotGroup& g = *norm.group();
  const double r = rho * std::pow(uniform(rng, 0.0, 1.0), 1.0 / g.homogeneous_dimension());
  if (r == 0.0) return g.identity();
  return g.dilate(r, norm.sample_unit_sphere(rng));
}

ReachabilityReport reachability_check(const TileSpec& tile, const Decomposer& decomposer,
                                      const std::vector<HorizontalBasis>& bases, const ReachabilityParams& prm) {
  tile.validate();
  if (bases.empty()) throw DomainError("reachability needs at least one basis");
  const CarnotGroup& g = *tile.group;
  require_same_group(g, *decomposer.group());
  const HomogeneousNorm& norm = decomposer.norm();
  std::vector<Decomposer> solvers;
  for (const auto& b : bases) solvers.push_back(decomposer.with_basis(b));

  ReachabilityReport rep;
  rep.min_nonzero = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < tile.centers.size(); ++j) {
    CenterReach cr;
    cr.center = static_cast<int>(j);
    cr.min_nonzero = std::numeric_limits<double>::infinity();
    Rng rng = make_rng(prm.seed, j);
    for (int t = 0; t < prm.samples_per_center; ++t) {
      ++cr.trials;
      const Vector y = sample_ball(norm, prm.rho, rng);
      const Vector v = g.difference(y, tile.centers[j]);
      const double nv = norm(v);
      const Decomposer& solver = solvers[static_cast<std::size_t>(t) % solvers.size()];
      double trial_min = std::numeric_limits<double>::infinity();
      double smax = 0.0;
      try {
        const DecompositionWord w = solver.decompose(v, prm.seed + static_cast<std::uint64_t>(t)).merged();
        for (double s : w.scalars) {
          if (s != 0.0) trial_min = std::min(trial_min, std::fabs(s));
          smax = std::max(smax, std::fabs(s));
        }
      } catch (const DecompositionError&) {
        ++cr.decomposition_failures;
        rep.trial_min_nonzero.push_back(0.0);
        continue;
      }
      const double ratio = nv > 0.0 ? smax / nv : 0.0;
      cr.min_nonzero = std::min(cr.min_nonzero, trial_min);
      cr.max_ratio = std::max(cr.max_ratio, ratio);
      rep.trial_min_nonzero.push_back(trial_min);
      if (trial_min > prm.xi && smax <= prm.c0 * nv * (1.0 + 1e-12)) ++cr.passed;
    }
    rep.trials += cr.trials;
    rep.passed += cr.passed;
    rep.min_nonzero = std::min(rep.min_nonzero, cr.min_nonzero);
    rep.max_ratio = std::max(rep.max_ratio, cr.max_ratio);
    rep.centers.push_back(cr);
  }
  rep.pass_fraction = rep.trials ? static_cast<double>(rep.passed) / rep.trials : 1.0;
  rep.xi_margin = rep.min_nonzero - prm.xi;
  rep.c0_margin = prm.c0 - rep.max_ratio;
  return rep;
}

}  // namespace carnot
