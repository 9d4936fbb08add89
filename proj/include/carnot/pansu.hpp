#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/fragment.hpp"
#include "carnot/hom.hpp"

namespace carnot {

/// A deterministic map between two groups.
struct MapSampler {
  GroupPtr source;
  GroupPtr target;
  std::function<Vector(const Vector&)> eval;
  std::optional<double> lipschitz;
  /// Optional quad-precision evaluation; residuals use it when present.
  std::function<QVector(const QVector&)> eval_quad;

  Vector operator()(const Vector& x) const { return eval(x); }
  QVector quad(const QVector& x) const;

  /// x -> g . L(x).
  static MapSampler translated_hom(const HomogeneousHom& L, const Vector& g);
};

/// (scale, residual) pairs with strictly decreasing scales.
class ResidualCurve {
 public:
  ResidualCurve() = default;
  explicit ResidualCurve(std::vector<std::pair<double, double>> points);

  const std::vector<std::pair<double, double>>& points() const { return points_; }
  double max_residual() const;
  /// Least-squares slope of log residual against log scale over scales in
  /// [t_min, 10 t_min]. Empty if fewer than two positive residuals there.
  std::optional<double> finest_decade_slope() const;
  std::string to_csv() const;

 private:
  std::vector<std::pair<double, double>> points_;
};

/// ||L(x0^{-1}x)^{-1} f(x0)^{-1} f(x)||_H / d(x0, x), evaluated in quad.
double pansu_residual(const MapSampler& f, const HomogeneousHom& L, const Vector& x0, const Vector& x,
                      const HomogeneousNorm& source_norm, const HomogeneousNorm& target_norm);

struct PansuOptions {
  /// Fit every graded block directly instead of propagating V_1.
  bool full_block = false;
  double extension_tolerance = 1e-9;
};

struct PansuEstimate {
  HomogeneousHom hom;
  ResidualCurve curve;
  double extension_defect = 0.0;
  std::optional<double> slope;
  bool full_block = false;
  double fit_scale = 0.0;
};

/// Fits A_1 by least squares on pi_1 delta_{1/t}(f(x0)^{-1} f(x0 delta_t v))
/// at the smallest scale, extends it by bracket propagation and tabulates
/// the worst residual over the directions at every scale.
PansuEstimate estimate_pansu_derivative(const MapSampler& f, const Vector& x0, std::vector<double> scales,
                                        const std::vector<Vector>& directions, const HomogeneousNorm& source_norm,
                                        const HomogeneousNorm& target_norm, const PansuOptions& options = {});

/// delta_{l_1}(d_{i_1}) ... delta_{l_M}(d_{i_M}) in the target group; word
/// indices are 1-based into `partials` (horizontal vectors of the target).
Vector assemble_differential(const CarnotGroup& target, const std::vector<Vector>& partials,
                             const std::vector<std::pair<int, double>>& word);

struct HorizontalDifferentialReport {
  enum class Status { pass, fail, inconclusive };
  Status status = Status::inconclusive;
  std::vector<double> defects;
  double max_defect = 0.0;
};

std::string to_string(HorizontalDifferentialReport::Status s);

/// For each fragment through x (gamma(t0) = x within 1e-9) with both
/// D(f o gamma)(t0) and D(phi o gamma)(t0) defined, the defect
/// |D(f o gamma)(t0) - D_H D(phi o gamma)(t0)|.
HorizontalDifferentialReport check_horizontal_differential(const Eigen::MatrixXd& d_h, const MapSampler& f,
                                                           const MapSampler& phi,
                                                           const std::vector<Fragment>& fragments, const Vector& x,
                                                           double tolerance);

}  // namespace carnot
