#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/sampling.hpp"

namespace carnot {

namespace math {

/// x^(1/k) computed on the mantissa only, so that scaling x by 2^(k m)
/// scales the result by exactly 2^m.
inline double hom_root(double x, int k) {
  if (k == 1 || x == 0.0) return x;
  int e = 0;
  const double m = std::frexp(x, &e);
  int q = e / k, r = e % k;
  if (r < 0) {
    r += k;
    --q;
  }
  return std::ldexp(root(std::ldexp(m, r), k), q);
}
inline Quad hom_root(Quad x, int k) {
  if (k == 1 || x == 0) return x;
  int e = 0;
  const Quad m = frexpq(x, &e);
  int q = e / k, r = e % k;
  if (r < 0) {
    r += k;
    --q;
  }
  return ldexpq(root(ldexpq(m, r), k), q);
}
inline long double hom_root(long double x, int k) {
  if (k == 1 || x == 0) return x;
  int e = 0;
  const long double m = std::frexp(x, &e);
  int q = e / k, r = e % k;
  if (r < 0) {
    r += k;
    --q;
  }
  return std::ldexp(root(std::ldexp(m, r), k), q);
}

}  // namespace math

struct CalibrationCertificate {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  /// max of ||xy|| / (||x|| + ||y||) over the certified pairs.
  double max_ratio = 0.0;
  /// Empirical max of |pi_1(x) - pi_1(y)| / d(x, y) over the same pairs.
  double pi1_lipschitz = 0.0;
  Vector worst_x;
  Vector worst_y;
  int rounds = 0;
  bool passed = false;
};

/// ||g|| = max{ |g_1|, eps_2 |g_2|^(1/2), ..., eps_s |g_s|^(1/s) } with
/// Euclidean |.| on each stratum and eps_1 = 1.
class HomogeneousNorm {
 public:
  HomogeneousNorm(GroupPtr group, std::vector<double> eps);
  /// All eps equal to one.
  static HomogeneousNorm unit(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  /// eps_j for j = 1..s (eps_1 is always 1).
  double epsilon(int j) const { return eps_[j - 1]; }
  /// eps_2..eps_s.
  std::vector<double> epsilons() const { return {eps_.begin() + 1, eps_.end()}; }

  template <class T>
  T value(const Coords<T>& g, int upto = 0) const {
    const Algebra& a = group_->algebra();
    const int s = upto > 0 ? upto : a.step();
    T best = T(0);
    for (int j = 1; j <= s; ++j) {
      T sq = T(0);
      for (int i = a.stratum_offset(j); i < a.stratum_offset(j) + a.stratum_dim(j); ++i) sq += g[i] * g[i];
      const T mag = math::sqrt(sq);
      const T term = j == 1 ? mag : T(eps_[j - 1]) * math::hom_root(mag, j);
      if (term > best) best = term;
    }
    return best;
  }

  double operator()(const Vector& g) const { return value(g); }

  /// Stratum at which the maximum in value(g) is attained.
  int dominant_stratum(const Vector& g) const;

  /// d(p, q) = ||p^{-1} q||.
  template <class T>
  T distance(const Coords<T>& p, const Coords<T>& q) const {
    return value(group_->difference(p, q));
  }

  /// A point with norm one, drawn so that every stratum has a fair chance
  /// of attaining the maximum.
  Vector sample_unit_sphere(Rng& rng) const;

  const std::optional<CalibrationCertificate>& certificate() const { return certificate_; }
  void set_certificate(CalibrationCertificate c) { certificate_ = std::move(c); }

 private:
  GroupPtr group_;
  std::vector<double> eps_;
  std::optional<CalibrationCertificate> certificate_;
};

class CalibrationError : public SolverError {
 public:
  CalibrationError(const std::string& what, CalibrationCertificate cert)
      : SolverError(what), certificate(std::move(cert)) {}
  CalibrationCertificate certificate;
};

struct CalibrationOptions {
  std::uint64_t seed = 1;
  /// Pairs used while searching each eps_j.
  std::size_t search_samples = 20000;
  int bisection_steps = 20;
  double margin = 0.98;
  int max_rounds = 12;
  /// Allowed relative excess of ||xy|| over ||x|| + ||y||.
  double tolerance = 1e-12;
};

/// Searches eps_2..eps_s stratum by stratum, then certifies the triangle
/// inequality on `sample_count` fresh pairs. Throws CalibrationError.
HomogeneousNorm calibrate_box_norm(GroupPtr group, std::size_t sample_count, const CalibrationOptions& opt = {});

/// Runs the certification step alone for given eps.
CalibrationCertificate certify_triangle(const HomogeneousNorm& norm, std::size_t sample_count, std::uint64_t seed,
                                        double tolerance = 1e-12);

}  // namespace carnot
