#include "carnot/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace carnot {

namespace {

// Orthonormal basis of the complement of unit e.
std::vector<Vector> complement_basis(const Vector& e) {
  const std::size_t n = e.size();
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < n && basis.size() + 1 < n; ++i) {
    Vector v(n);
    v[i] = 1.0;
    v -= dot(v, e) * e;
    for (const auto& b : basis) v -= dot(v, b) * b;
    const double len = euclidean_norm(v);
    if (len > 1e-8) basis.push_back((1.0 / len) * v);
  }
  return basis;
}

double face_minimum(const std::vector<Vector>& u, std::size_t k) {
  const std::size_t m = u.size();
  std::vector<double> a(m, 0.0);
  a[k] = 1.0;
  Vector r = u[k];
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double old = a[i];
      const double target = std::clamp(old - dot(r, u[i]), -1.0, 1.0);
      if (target != old) {
        r += (target - old) * u[i];
        a[i] = target;
        change = std::max(change, std::fabs(target - old));
      }
    }
    if (change < 1e-15) break;
  }
  return euclidean_norm(r);
}

}  // namespace

Cone::Cone(Vector a, double s) : axis(std::move(a)), sigma(s) {
  if (std::fabs(euclidean_norm(axis) - 1.0) > 1e-12) throw DomainError("cone axis must be a unit vector");
  if (!(sigma >= 0.0)) throw DomainError("cone opening must be nonnegative");
}

Cone Cone::from_direction(const Vector& direction, double sigma) {
  const double len = euclidean_norm(direction);
  if (len == 0.0) throw DomainError("cone axis must be nonzero");
  return Cone((1.0 / len) * direction, sigma);
}

double Cone::half_angle() const { return std::acos(std::clamp(1.0 - sigma * sigma, -1.0, 1.0)); }

bool in_cone(const Vector& x, const Cone& c, bool strict) {
  if (x.size() != c.axis.size()) throw SpecMismatch("vector and cone live in different dimensions");
  const double len = euclidean_norm(x);
  if (len == 0.0) return !strict;
  return dot(x, c.axis) >= (1.0 - c.sigma * c.sigma) * len;
}

CCurveResult is_C_curve(const Fragment& gamma, const Cone& c) {
  if (!gamma.group()) throw DomainError("is_C_curve needs a fragment in a group");
  const Algebra& a = gamma.group()->algebra();
  std::vector<Vector> p;
  p.reserve(gamma.size());
  for (const auto& x : gamma.points()) p.push_back(a.stratum(x, 1));
  CCurveResult res;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (!in_cone(p[j] - p[i], c, true)) {
        res.ok = false;
        res.violation = std::make_pair(i, j);
        return res;
      }
  return res;
}

XiResult xi_separated(const std::vector<Vector>& vectors, double xi) {
  if (!(xi > 0.0)) throw DomainError("xi must be positive");
  std::vector<Vector> u;
  for (const auto& v : vectors) {
    const double len = euclidean_norm(v);
    if (len > 0.0) u.push_back((1.0 / len) * v);
  }
  XiResult res;
  if (u.empty()) {
    res.min_ratio = std::numeric_limits<double>::infinity();
  } else if (u.size() == 1) {
    res.min_ratio = 1.0;
  } else if (u.size() == 2) {
    const double c = std::clamp(dot(u[0], u[1]), -1.0, 1.0);
    res.min_ratio = std::sqrt(std::max(0.0, 1.0 - c * c));
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k) best = std::min(best, face_minimum(u, k));
    res.min_ratio = best;
  }
  res.separated = res.min_ratio > xi;
  return res;
}

XiResult cones_xi_separated(const std::vector<Cone>& cones, double xi, int boundary_samples) {
  if (!(xi > 0.0)) throw DomainError("xi must be positive");
  std::vector<std::vector<Vector>> dirs;
  Rng rng = make_rng(17, 0);
  for (const auto& c : cones) {
    std::vector<Vector> d{c.axis};
    const auto basis = complement_basis(c.axis);
    const double th = c.half_angle();
    if (!basis.empty() && th > 0.0) {
      for (int k = 0; k < boundary_samples; ++k) {
        Vector w(c.axis.size());
        if (basis.size() == 1) {
          w = (k % 2 == 0 ? 1.0 : -1.0) * basis[0];
        } else {
          const Vector g = random_direction(rng, static_cast<int>(basis.size()));
          for (std::size_t i = 0; i < basis.size(); ++i) w += g[i] * basis[i];
        }
        for (double f : {1.0, 0.5}) d.push_back(std::cos(f * th) * c.axis + std::sin(f * th) * w);
        if (basis.size() == 1 && k >= 1) break;
      }
    }
    dirs.push_back(std::move(d));
  }
  XiResult res;
  res.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(cones.size(), 0);
  std::vector<Vector> sel(cones.size());
  for (;;) {
    for (std::size_t i = 0; i < cones.size(); ++i) sel[i] = dirs[i][idx[i]];
    res.min_ratio = std::min(res.min_ratio, xi_separated(sel, xi).min_ratio);
    std::size_t i = 0;
    while (i < cones.size() && ++idx[i] == dirs[i].size()) idx[i++] = 0;
    if (i == cones.size()) break;
  }
  res.separated = res.min_ratio > xi;
  return res;
}

std::vector<RefinedCone> refine_cone_cover(const std::vector<Cone>& parents, int l) {
  if (l < 1) throw DomainError("refinement level must be a positive integer");
  const double alpha = 1.0 / l;
  const double theta_c = std::acos(1.0 - alpha * alpha);
  std::vector<RefinedCone> out;
  for (std::size_t p = 0; p < parents.size(); ++p) {
    const Cone& parent = parents[p];
    const auto basis = complement_basis(parent.axis);
    const int d = static_cast<int>(basis.size());
    out.push_back({p, Cone(parent.axis, alpha)});
    const double th = parent.half_angle();
    if (d == 0 || th <= 0.0) continue;
    const double cap = std::tan(th);
    const double cover = 0.9 * theta_c;
    const double h = 2.0 * cover / std::sqrt(static_cast<double>(d));
    const double reach = cap + cover;
    const int kmax = static_cast<int>(std::floor(reach / h));
    std::map<std::vector<long long>, bool> seen;
    std::vector<int> k(static_cast<std::size_t>(d), -kmax);
    for (;;) {
      double r2 = 0.0;
      for (int x : k) r2 += (x * h) * (x * h);
      bool origin = true;
      for (int x : k) origin = origin && x == 0;
      if (!origin && r2 <= reach * reach) {
        Vector t(parent.axis.size());
        for (int i = 0; i < d; ++i) t += (k[i] * h) * basis[i];
        const double r = std::sqrt(r2);
        // Clamped axes land just inside the boundary.
        if (r > cap) t *= cap * (1.0 - 1e-12) / r;
        Vector w = parent.axis + t;
        w *= 1.0 / euclidean_norm(w);
        std::vector<long long> key;
        for (double x : w) key.push_back(std::llround(x * 1e12));
        if (!seen.count(key)) {
          seen[key] = true;
          out.push_back({p, Cone(w, alpha)});
        }
      }
      int i = 0;
      while (i < d && ++k[i] > kmax) k[i++] = -kmax;
      if (i == d) break;
    }
  }
  return out;
}

CoverCheck verify_cone_cover(const std::vector<Cone>& parents, const std::vector<RefinedCone>& cover,
                             std::size_t samples_per_parent, std::uint64_t seed) {
  CoverCheck chk;
  chk.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& rc : cover)
    if (!in_cone(rc.cone.axis, parents[rc.parent])) chk.axes_in_parent = false;
  Rng rng = make_rng(seed, 0);
  for (std::size_t p = 0; p < parents.size(); ++p) {
    const Cone& parent = parents[p];
    const auto basis = complement_basis(parent.axis);
    const double th = parent.half_angle();
    for (std::size_t s = 0; s < samples_per_parent; ++s) {
      Vector x = parent.axis;
      if (!basis.empty() && th > 0.0) {
        double ang;
        Vector w(parent.axis.size());
        if (basis.size() == 1) {
          ang = -th + 2.0 * th * (static_cast<double>(s) + 0.5) / static_cast<double>(samples_per_parent);
          if (s == 0) ang = -th;
          if (s + 1 == samples_per_parent) ang = th;
          w = basis[0];
        } else {
          ang = th * std::sqrt(uniform(rng, 0.0, 1.0));
          if (s % 8 == 0) ang = th;
          const Vector g = random_direction(rng, static_cast<int>(basis.size()));
          for (std::size_t i = 0; i < basis.size(); ++i) w += g[i] * basis[i];
        }
        x = std::cos(ang) * parent.axis + std::sin(ang) * w;
      }
      if (!in_cone(x, parent)) continue;
      ++chk.samples;
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& rc : cover) {
        if (rc.parent != p) continue;
        const double a2 = rc.cone.sigma * rc.cone.sigma;
        best = std::max(best, dot(x, rc.cone.axis) - (1.0 - a2) * euclidean_norm(x));
      }
      chk.worst_margin = std::min(chk.worst_margin, best);
      if (!(best > 0.0)) chk.covered = false;
    }
  }
  return chk;
}

}  // namespace carnot
