#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "carnot/cones.hpp"

namespace carnot {

class HypothesisError : public DomainError {
 public:
  HypothesisError(const std::string& item, const std::string& what) : DomainError(what), item(item) {}
  std::string item;
};

struct DriftRow {
  double rho;
  double lhs;
  double bound;  // sigma^{1/s} |rho|
  double ratio;
};

struct DriftOptions {
  int radii_per_decade = 16;
  /// Radii and offsets below this many mesh widths are not sampled.
  double min_mesh_factor = 4.0;
  bool check_hypotheses = true;
};

struct DriftReport {
  std::vector<DriftRow> rows;
  double max_ratio = 0.0;
  double min_density = 1.0;
  double mesh = 0.0;
};

/// For sampled offsets rho with |rho| < R, lhs = d(gamma(t0+rho),
/// gamma(t0) . (I e)) where I is the sum of |pi_1 increments| over domain
/// cells between t0 and t0+rho (signed by rho). Hypotheses checked first:
/// (i) density fraction >= 1 - sigma at sampled r < R, (ii) the cone
/// condition for C(e, sigma) on samples within R of t0. Throws
/// HypothesisError naming the failed item.
DriftReport verify_drift(const Fragment& gamma, const Vector& e, double sigma, double t0, double R,
                         const DriftOptions& options = {});

struct DriftFamilyOptions {
  double mesh = 1e-3;
  double half_length = 1.0;
  /// Scale of the transverse wobble.
  double wobble_length = 0.3;
  std::uint64_t seed = 5;
};

/// A horizontal curve in a step-2 group through gamma(0) with velocity
/// e_1 + sigma w(t) e_2 (|w| <= 1, smooth) and one sample removed every
/// 8/sigma samples, so a sigma/4 share of the domain is missing while 0
/// stays centered in a full segment.
Fragment synthetic_drift_fragment(const HomogeneousNorm& norm, double sigma, const DriftFamilyOptions& options = {});

struct WitnessParams {
  Vector y;
  double v = 0.1;
  double R = 0.1;
  double K1 = 0.01;
  int M = 1;
  int s = 1;
  Vector e;
  /// Radius bound for the density clause; if <= 0 it is 40 (diam+1) c0 R.
  double radius_bound = 0.0;
  double diam = 1.0;
  double c0 = 1.0;
  int radii_per_decade = 16;
};

struct WitnessResult {
  bool pass = false;
  int failed_clause = 0;
  std::string detail;
  /// log of (K1 v)^{s^{2M}}, which underflows as a double.
  double log_kappa = 0.0;
};

/// Evaluates the three clauses of the good-point predicate at sample t:
/// (i) gamma(t) = y, (ii) the missing share of the domain in (t-r, t+r) is
/// below kappa = (K1 v)^{s^{2M}} at sampled r, (iii) for sample pairs
/// within the radius bound, the pi_1 increment of phi o gamma lies in
/// C(e, kappa) \ {0} and exceeds v times the distance in gamma's space.
WitnessResult good_point_witness(const Fragment& gamma, const std::function<Vector(const Vector&)>& phi,
                                 const CarnotGroup& phi_group, double t, const WitnessParams& params);

}  // namespace carnot
