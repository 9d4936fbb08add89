#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/norm.hpp"

namespace carnot {

/// A curve known on finitely many sample times. The domain is the union of
/// the half-open cells [t_i, t_{i+1}) whose length is at most gap_factor
/// times the median spacing; longer cells are gaps.
class Fragment {
 public:
  using Distance = std::function<double(const Vector&, const Vector&)>;

  /// Checks that all pairs satisfy |s-t|/2 <= d <= 2|s-t|; throws
  /// DomainError naming the first violating pair.
  static Fragment create(std::vector<double> times, std::vector<Vector> points, Distance distance,
                         double gap_factor = 1.5);
  /// Same as create without the bi-Lipschitz check.
  static Fragment sampled(std::vector<double> times, std::vector<Vector> points, Distance distance,
                          double gap_factor = 1.5);
  /// A fragment in a group with the distance of `norm`.
  static Fragment in_group(const HomogeneousNorm& norm, std::vector<double> times, std::vector<Vector> points,
                           bool check_bilipschitz = true, double gap_factor = 1.5);

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vector>& points() const { return points_; }
  std::size_t size() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  const Vector& point(std::size_t i) const { return points_[i]; }
  double distance(const Vector& a, const Vector& b) const { return distance_(a, b); }
  const Distance& distance_function() const { return distance_; }
  /// Null for fragments in an abstract metric space.
  const GroupPtr& group() const { return group_; }

  double mesh() const { return mesh_; }
  /// Whether [t_i, t_{i+1}) belongs to the domain.
  bool cell_in_domain(std::size_t i) const { return i + 1 < times_.size() && cell_[i]; }
  /// Lebesgue measure of the domain inside (a, b).
  double domain_measure(double a, double b) const;
  /// Index of the sample at time t (relative tolerance 1e-12), if any.
  std::optional<std::size_t> index_of(double t) const;

  /// Applies a map to every point, keeping the times.
  Fragment mapped(const std::function<Vector(const Vector&)>& f, GroupPtr group, Distance distance) const;

 private:
  Fragment(std::vector<double> times, std::vector<Vector> points, Distance distance, double gap_factor);

  std::vector<double> times_;
  std::vector<Vector> points_;
  Distance distance_;
  GroupPtr group_;
  double mesh_ = 0.0;
  std::vector<char> cell_;
  double gap_factor_ = 1.5;
};

/// Domain measure inside (t0 - r, t0 + r) divided by 2r.
double density_fraction(const Fragment& gamma, double t0, double r);

/// Difference quotient of pi_1 of a group fragment at the sample t0:
/// symmetric when both neighboring cells are in the domain, one-sided at a
/// domain edge. Empty when t0 is isolated or when the higher strata of
/// delta_{1/h}(gamma(t0)^{-1} gamma(t0+h)) have Euclidean size >= h^0.5.
/// Throws DomainError when t0 is not a sample time.
std::optional<Vector> fragment_derivative(const Fragment& gamma, double t0);

struct SpeedCheckReport {
  std::size_t tested = 0;
  std::size_t passed = 0;
  double fraction = 0.0;
  double mesh = 0.0;
};

/// At every interior sample compares |D(phi o gamma)(t0)| with
/// delta * Lip(pi_1 o phi, gamma(t0)) * Lip(gamma, t0), the pointwise
/// constants estimated over samples within three mesh widths.
/// `phi` maps points of gamma's space into `phi_group`. Throws DomainError
/// when a sample has fewer than three neighbors in that window.
SpeedCheckReport horizontal_speed_check(const Fragment& gamma, const std::function<Vector(const Vector&)>& phi,
                                        const HomogeneousNorm& phi_norm, double delta);

}  // namespace carnot
