#include "carnot/fragment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace carnot {

namespace {

Fragment::Distance norm_distance(const HomogeneousNorm& norm) {
  return [norm](const Vector& a, const Vector& b) { return norm.distance(a, b); };
}

}  // namespace

Fragment::Fragment(std::vector<double> times, std::vector<Vector> points, Distance distance, double gap_factor)
    : times_(std::move(times)), points_(std::move(points)), distance_(std::move(distance)) {
  if (times_.empty()) throw DomainError("fragment needs at least one sample");
  if (times_.size() != points_.size()) throw DomainError("fragment times and points differ in length");
  if (!distance_) throw DomainError("fragment needs a distance");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw DomainError("fragment times must be strictly increasing");
  std::vector<double> gaps;
  for (std::size_t i = 1; i < times_.size(); ++i) gaps.push_back(times_[i] - times_[i - 1]);
  if (!gaps.empty()) {
    auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());
    mesh_ = *mid;
  }
  cell_.assign(times_.size(), 0);
  for (std::size_t i = 0; i + 1 < times_.size(); ++i)
    cell_[i] = (times_[i + 1] - times_[i]) <= gap_factor * mesh_ * (1.0 + 1e-12);
  gap_factor_ = gap_factor;
}

Fragment Fragment::sampled(std::vector<double> times, std::vector<Vector> points, Distance distance,
                           double gap_factor) {
  return Fragment(std::move(times), std::move(points), std::move(distance), gap_factor);
}

Fragment Fragment::create(std::vector<double> times, std::vector<Vector> points, Distance distance,
                          double gap_factor) {
  Fragment f(std::move(times), std::move(points), std::move(distance), gap_factor);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      const double dt = f.times_[j] - f.times_[i];
      const double d = f.distance_(f.points_[i], f.points_[j]);
      if (d < 0.5 * dt || d > 2.0 * dt) {
        std::ostringstream os;
        os << "samples t=" << f.times_[i] << " and t=" << f.times_[j] << " are at distance " << d
           << ", outside [" << 0.5 * dt << ", " << 2.0 * dt << "]";
        throw DomainError("fragment is not 2-bi-Lipschitz: " + os.str());
      }
    }
  return f;
}

Fragment Fragment::in_group(const HomogeneousNorm& norm, std::vector<double> times, std::vector<Vector> points,
                            bool check_bilipschitz, double gap_factor) {
  Fragment f = check_bilipschitz ? create(std::move(times), std::move(points), norm_distance(norm), gap_factor)
                                 : sampled(std::move(times), std::move(points), norm_distance(norm), gap_factor);
  f.group_ = norm.group();
  return f;
}

Fragment Fragment::mapped(const std::function<Vector(const Vector&)>& f, GroupPtr group, Distance distance) const {
  std::vector<Vector> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(f(p));
  Fragment out(times_, std::move(pts), std::move(distance), gap_factor_);
  out.group_ = std::move(group);
  return out;
}

double Fragment::domain_measure(double a, double b) const {
  if (!(b > a)) return 0.0;
  auto it = std::upper_bound(times_.begin(), times_.end(), a);
  std::size_t start = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  double total = 0.0;
  for (std::size_t i = start; i + 1 < times_.size() && times_[i] < b; ++i) {
    if (!cell_[i]) continue;
    const double lo = std::max(a, times_[i]);
    const double hi = std::min(b, times_[i + 1]);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

std::optional<std::size_t> Fragment::index_of(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const double tol = 1e-12 * std::max(1.0, std::fabs(t));
  std::optional<std::size_t> best;
  double best_gap = tol;
  for (auto c : {it, it == times_.begin() ? it : it - 1}) {
    if (c == times_.end()) continue;
    const double gap = std::fabs(*c - t);
    if (gap <= best_gap) {
      best_gap = gap;
      best = static_cast<std::size_t>(c - times_.begin());
    }
  }
  return best;
}

double density_fraction(const Fragment& gamma, double t0, double r) {
  if (!(r > 0.0)) throw DomainError("density_fraction needs r > 0");
  return gamma.domain_measure(t0 - r, t0 + r) / (2.0 * r);
}

std::optional<Vector> fragment_derivative(const Fragment& gamma, double t0) {
  if (!gamma.group()) throw DomainError("fragment_derivative needs a fragment in a group");
  const auto idx = gamma.index_of(t0);
  if (!idx) throw DomainError("t0 is not a sample time of the fragment");
  const std::size_t i = *idx;
  const bool left = i > 0 && gamma.cell_in_domain(i - 1);
  const bool right = gamma.cell_in_domain(i);
  if (!left && !right) return std::nullopt;

  const CarnotGroup& g = *gamma.group();
  const Algebra& a = g.algebra();
  auto horizontal = [&](std::size_t lo, std::size_t hi) {
    const double h = gamma.time(hi) - gamma.time(lo);
    const Vector q = g.dilate(1.0 / h, g.difference(gamma.point(lo), gamma.point(hi)));
    double sq = 0.0;
    for (int k = a.stratum_dim(1); k < a.dim(); ++k) sq += q[k] * q[k];
    return std::sqrt(sq) < std::sqrt(h);
  };
  if (left && !horizontal(i - 1, i)) return std::nullopt;
  if (right && !horizontal(i, i + 1)) return std::nullopt;

  const std::size_t lo = left ? i - 1 : i;
  const std::size_t hi = right ? i + 1 : i;
  const double dt = gamma.time(hi) - gamma.time(lo);
  Vector d = a.stratum(gamma.point(hi), 1) - a.stratum(gamma.point(lo), 1);
  d *= 1.0 / dt;
  return d;
}

SpeedCheckReport horizontal_speed_check(const Fragment& gamma, const std::function<Vector(const Vector&)>& phi,
                                        const HomogeneousNorm& phi_norm, double delta) {
  if (delta < 0.0) throw DomainError("speed threshold must be nonnegative");
  const Fragment image = gamma.mapped(
      phi, phi_norm.group(), [phi_norm](const Vector& x, const Vector& y) { return phi_norm.distance(x, y); });
  const Algebra& a = phi_norm.group()->algebra();
  SpeedCheckReport rep;
  rep.mesh = gamma.mesh();
  const double window = 3.0 * gamma.mesh() * (1.0 + 1e-9);
  for (std::size_t i = 1; i + 1 < gamma.size(); ++i) {
    if (!gamma.cell_in_domain(i - 1) || !gamma.cell_in_domain(i)) continue;
    double lip_gamma = 0.0, lip_phi = 0.0;
    int neighbors = 0;
    for (std::size_t j = i; j-- > 0 && gamma.time(i) - gamma.time(j) <= window;) {
      ++neighbors;
      const double d = gamma.distance(gamma.point(i), gamma.point(j));
      lip_gamma = std::max(lip_gamma, d / (gamma.time(i) - gamma.time(j)));
      if (d > 0.0)
        lip_phi = std::max(lip_phi, euclidean_norm(a.stratum(image.point(i), 1) - a.stratum(image.point(j), 1)) / d);
    }
    for (std::size_t j = i + 1; j < gamma.size() && gamma.time(j) - gamma.time(i) <= window; ++j) {
      ++neighbors;
      const double d = gamma.distance(gamma.point(i), gamma.point(j));
      lip_gamma = std::max(lip_gamma, d / (gamma.time(j) - gamma.time(i)));
      if (d > 0.0)
        lip_phi = std::max(lip_phi, euclidean_norm(a.stratum(image.point(i), 1) - a.stratum(image.point(j), 1)) / d);
    }
    if (neighbors < 3)
      throw DomainError("fragment too sparse for local Lipschitz estimation at t=" + std::to_string(gamma.time(i)));
    ++rep.tested;
    const auto D = fragment_derivative(image, gamma.time(i));
    const bool ok = D ? euclidean_norm(*D) >= delta * lip_phi * lip_gamma * (1.0 - 1e-12) : delta == 0.0;
    if (ok) ++rep.passed;
  }
  rep.fraction = rep.tested ? static_cast<double>(rep.passed) / static_cast<double>(rep.tested) : 0.0;
  return rep;
}

}  // namespace carnot
