#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/norm.hpp"

namespace carnot {

struct LedgerInputs {
  double diam = 1.0;
  double c0 = 1.0;
  int M = 2;
  double lambda = 0.1;
  double lip_phi = 1.0;
  int s = 1;
  /// Conjugation constant: ||y^{-1} x y|| <= C ||x||^{1/s} on the relevant ball.
  double C = 1.0;
  /// Drift constant.
  double C1 = 1.0;
  double xi = 0.1;
  double c_surj = 0.1;
  /// Natural logs of K_1 and C_6; half their upper bounds when unset.
  std::optional<double> log_K1;
  std::optional<double> log_C6;
};

struct LedgerCheck {
  std::string name;
  bool pass = false;
  /// Natural logs of both sides of lhs < rhs.
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  /// Input to shrink when the check fails, empty otherwise.
  std::string shrink;
};

/// All derived constants. Quantities that can underflow a double are kept
/// as natural logs (log_ prefix).
struct ConstantLedger {
  LedgerInputs inputs;
  double eps1 = 0.0;
  double log_K1_bound = 0.0;
  double log_K1 = 0.0;
  double C7 = 0.0;
  double N = 0.0;
  double log_C6_bound = 0.0;
  double log_C6 = 0.0;
  double C5 = 0.0;
  double log_C11 = 0.0;
  double log_C4 = 0.0;
  double log_C2 = 0.0;
  std::vector<LedgerCheck> checks;
  int shrink_rounds = 0;

  bool all_pass() const;
  const LedgerCheck* first_failure() const;
  const LedgerCheck& check(const std::string& name) const;
};

/// Evaluates the chain at the given inputs. Throws DomainError unless all
/// inputs are positive, s >= 1, M >= 1 and lambda < diam / 4.
ConstantLedger constant_ledger(const LedgerInputs& inputs);

/// Chooses K_1 and C_6 small enough that C_11 and C_2 meet their bounds,
/// then re-evaluates. The returned ledger may still fail (for instance when
/// C_7 / 10 is the binding bound); the failure is named in its checks.
ConstantLedger shrink_ledger(LedgerInputs inputs, int max_rounds = 8);

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

/// Empirical max of ||y^{-1} x y|| / ||x||^{1/s} over x, y in B(0, radius).
double conjugation_constant(const HomogeneousNorm& norm, double radius, std::size_t samples, std::uint64_t seed);

}  // namespace carnot
