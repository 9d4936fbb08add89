#include "carnot/norm.hpp"

#include <cmath>
#include <sstream>

#include "carnot/parallel.hpp"

namespace carnot {

namespace {

// Random data from which a unit-norm point is rebuilt for any eps, so that
// the search sees the same sample while eps_j moves.
struct Shape {
  std::vector<Vector> dirs;
  std::vector<double> radii;
};

struct PairShape {
  Shape x, y;
  double t = 1.0;
  bool swap = false;
};

Shape draw_shape(Rng& rng, const Algebra& a) {
  Shape sh;
  bool any_one = false;
  for (int j = 1; j <= a.step(); ++j) {
    sh.dirs.push_back(random_direction(rng, a.stratum_dim(j)));
    double r = uniform(rng, 0.0, 1.0);
    if (uniform(rng, 0.0, 1.0) < 1.0 / 3.0) {
      r = 1.0;
      any_one = true;
    }
    sh.radii.push_back(r);
  }
  if (!any_one) {
    std::uniform_int_distribution<int> pick(0, a.step() - 1);
    sh.radii[pick(rng)] = 1.0;
  }
  return sh;
}

Vector realize(const Shape& sh, const Algebra& a, const std::vector<double>& eps) {
  Vector g(static_cast<std::size_t>(a.dim()));
  for (int j = 1; j <= a.step(); ++j) {
    const double mag = std::pow(sh.radii[j - 1] / eps[j - 1], j);
    for (int i = 0; i < a.stratum_dim(j); ++i) g[a.stratum_offset(j) + i] = mag * sh.dirs[j - 1][i];
  }
  return g;
}

PairShape draw_pair(Rng& rng, const Algebra& a) {
  PairShape p;
  p.x = draw_shape(rng, a);
  p.y = draw_shape(rng, a);
  p.t = log_uniform(rng, 1e-3, 1.0);
  p.swap = uniform(rng, 0.0, 1.0) < 0.5;
  return p;
}

struct Pair {
  Vector x, y;
};

Pair realize(const PairShape& ps, const CarnotGroup& g, const std::vector<double>& eps) {
  Vector x = realize(ps.x, g.algebra(), eps);
  Vector y = g.dilate(ps.t, realize(ps.y, g.algebra(), eps));
  if (ps.swap) std::swap(x, y);
  return {x, y};
}

double ratio(const HomogeneousNorm& norm, const Pair& p, int upto) {
  const auto& g = *norm.group();
  const double lhs = norm.value(g.multiply(p.x, p.y), upto);
  const double rhs = norm.value(p.x, upto) + norm.value(p.y, upto);
  return rhs == 0.0 ? 0.0 : lhs / rhs;
}

bool all_pass(const GroupPtr& group, const std::vector<PairShape>& shapes, const std::vector<double>& eps, int upto,
              double tol) {
  HomogeneousNorm norm(group, {eps.begin() + 1, eps.end()});
  std::atomic<bool> ok{true};
  parallel_chunks(shapes.size(), 2048, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e && ok; ++i)
      if (ratio(norm, realize(shapes[i], *group, eps), upto) > 1.0 + tol) ok = false;
  });
  return ok;
}

}  // namespace

HomogeneousNorm::HomogeneousNorm(GroupPtr group, std::vector<double> eps) : group_(std::move(group)) {
  if (!group_) throw SpecMismatch("HomogeneousNorm needs a group");
  if (static_cast<int>(eps.size()) != group_->step() - 1)
    throw SpecMismatch("norm for '" + group_->name() + "' needs " + std::to_string(group_->step() - 1) +
                       " epsilons, got " + std::to_string(eps.size()));
  eps_.push_back(1.0);
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("norm epsilons must be positive and finite");
    eps_.push_back(e);
  }
}

HomogeneousNorm HomogeneousNorm::unit(GroupPtr group) {
  const int s = group->step();
  return HomogeneousNorm(std::move(group), std::vector<double>(static_cast<std::size_t>(s - 1), 1.0));
}

int HomogeneousNorm::dominant_stratum(const Vector& g) const {
  int best_j = 1;
  double best = -1.0;
  for (int j = 1; j <= group_->step(); ++j) {
    const double v = value(group_->algebra().project(g, j));
    if (v > best) {
      best = v;
      best_j = j;
    }
  }
  return best_j;
}

Vector HomogeneousNorm::sample_unit_sphere(Rng& rng) const {
  return realize(draw_shape(rng, group_->algebra()), group_->algebra(), eps_);
}

CalibrationCertificate certify_triangle(const HomogeneousNorm& norm, std::size_t sample_count, std::uint64_t seed,
                                        double tolerance) {
  const GroupPtr& group = norm.group();
  std::vector<double> eps{1.0};
  for (double e : norm.epsilons()) eps.push_back(e);

  struct Partial {
    double max_ratio = 0.0;
    double lip = 0.0;
    Pair worst;
  };
  const std::size_t chunk = 4096;
  Partial total = parallel_reduce(
      sample_count, chunk, Partial{},
      [&](std::size_t c, std::size_t b, std::size_t e) {
        Rng rng = make_rng(seed, 0x5eed0000ull + c);
        Partial p;
        for (std::size_t i = b; i < e; ++i) {
          Pair pr = realize(draw_pair(rng, group->algebra()), *group, eps);
          const double r = ratio(norm, pr, 0);
          if (r > p.max_ratio || p.worst.x.size() == 0) {
            p.max_ratio = std::max(p.max_ratio, r);
            p.worst = pr;
          }
          const double d = norm.distance(pr.x, pr.y);
          if (d > 0.0) {
            const auto a = group->algebra().stratum(pr.x, 1), bb = group->algebra().stratum(pr.y, 1);
            p.lip = std::max(p.lip, euclidean_norm(a - bb) / d);
          }
        }
        return p;
      },
      [](Partial acc, Partial p) {
        if (p.max_ratio > acc.max_ratio || acc.worst.x.size() == 0) {
          acc.max_ratio = p.max_ratio;
          acc.worst = p.worst;
        }
        acc.lip = std::max(acc.lip, p.lip);
        return acc;
      });
  CalibrationCertificate cert;
  cert.seed = seed;
  cert.samples = sample_count;
  cert.max_ratio = total.max_ratio;
  cert.pi1_lipschitz = total.lip;
  cert.worst_x = total.worst.x;
  cert.worst_y = total.worst.y;
  cert.passed = cert.max_ratio <= 1.0 + tolerance;
  return cert;
}

HomogeneousNorm calibrate_box_norm(GroupPtr group, std::size_t sample_count, const CalibrationOptions& opt) {
  const int s = group->step();
  std::vector<double> eps(static_cast<std::size_t>(s), 1.0);

  Rng rng = make_rng(opt.seed, 1);
  std::vector<PairShape> shapes;
  shapes.reserve(opt.search_samples);
  for (std::size_t i = 0; i < opt.search_samples; ++i) shapes.push_back(draw_pair(rng, group->algebra()));

  for (int j = 2; j <= s; ++j) {
    eps[j - 1] = 1.0;
    if (all_pass(group, shapes, eps, j, opt.tolerance)) continue;
    double hi = 1.0, lo = 0.5;
    for (;;) {
      eps[j - 1] = lo;
      if (all_pass(group, shapes, eps, j, opt.tolerance)) break;
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-12) {
        CalibrationCertificate cert;
        cert.seed = opt.seed;
        throw CalibrationError("no eps_" + std::to_string(j) + " above 1e-12 passes the search sample", cert);
      }
    }
    for (int it = 0; it < opt.bisection_steps; ++it) {
      const double mid = 0.5 * (lo + hi);
      eps[j - 1] = mid;
      if (all_pass(group, shapes, eps, j, opt.tolerance))
        lo = mid;
      else
        hi = mid;
    }
    eps[j - 1] = opt.margin * lo;
  }

  CalibrationCertificate cert;
  for (int round = 1; round <= opt.max_rounds; ++round) {
    HomogeneousNorm norm(group, {eps.begin() + 1, eps.end()});
    cert = certify_triangle(norm, sample_count, opt.seed + 0x1000u * round, opt.tolerance);
    cert.rounds = round;
    if (cert.passed) {
      norm.set_certificate(cert);
      return norm;
    }
    const int j = norm.dominant_stratum(group->multiply(cert.worst_x, cert.worst_y));
    if (j < 2) break;
    eps[j - 1] *= 0.5;
  }
  std::ostringstream os;
  os << "triangle inequality still fails for '" << group->name() << "' after " << opt.max_rounds
     << " rounds; worst ratio " << cert.max_ratio;
  throw CalibrationError(os.str(), cert);
}

}  // namespace carnot
