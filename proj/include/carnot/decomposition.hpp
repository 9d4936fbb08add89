#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/norm.hpp"

namespace carnot {

/// n_1 horizontal vectors spanning V_1, stored normalized (length n_1 each).
class HorizontalBasis {
 public:
  /// Throws DomainError if the vectors do not span V_1.
  HorizontalBasis(const CarnotGroup& group, std::vector<Vector> vectors);
  static HorizontalBasis standard(const CarnotGroup& group);

  std::size_t size() const { return v_.size(); }
  /// 1-based letter as a full group element.
  const Vector& letter(int i) const { return full_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<Vector>& vectors() const { return v_; }

 private:
  std::vector<Vector> v_;
  std::vector<Vector> full_;
};

/// delta_{s_1}(v_{i_1}) ... delta_{s_M}(v_{i_M}); pattern is 1-based.
Vector evaluate_word(const CarnotGroup& group, const HorizontalBasis& basis, const std::vector<int>& pattern,
                     const std::vector<double>& scalars);

/// F(s) = delta_{s_1}(v_{i_1}) ... delta_{s_n}(v_{i_n}) .
///        delta_{-s^_n}(v_{i_n}) ... delta_{-s^_1}(v_{i_1}),
/// so that F(s^) = 0 exactly.
class FlowComposition {
 public:
  FlowComposition(GroupPtr group, HorizontalBasis basis, std::vector<int> pattern, std::vector<double> anchor);

  Vector operator()(const std::vector<double>& s) const;
  /// Central finite differences.
  Eigen::MatrixXd jacobian(const std::vector<double>& s, double h = 1e-6) const;

  const GroupPtr& group() const { return group_; }
  const HorizontalBasis& basis() const { return basis_; }
  const std::vector<int>& pattern() const { return pattern_; }
  const std::vector<double>& anchor() const { return anchor_; }

 private:
  GroupPtr group_;
  HorizontalBasis basis_;
  std::vector<int> pattern_;
  std::vector<double> anchor_;
  Vector tail_;  // the anchor product, inverted
};

double condition_number(const Eigen::MatrixXd& m);
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

struct Anchor {
  std::vector<int> pattern;
  std::vector<double> s_hat;
  double condition = 0.0;
  /// Targets of norm <= zeta are solved from s_hat by Newton.
  double zeta = 0.0;
  int patterns_tried = 0;
};

struct AnchorOptions {
  int pattern_search_budget = 200;
  int anchors_per_pattern = 4;
  double max_condition = 1e6;
  int zeta_samples = 256;
  std::uint64_t seed = 1;
};

/// Searches index patterns hitting every letter (cyclic pattern first) for
/// an anchor with a well-conditioned Jacobian, then certifies zeta.
Anchor select_anchor(const GroupPtr& group, const HorizontalBasis& basis, const HomogeneousNorm& norm,
                     const AnchorOptions& options = {});

struct DecompositionWord {
  std::vector<int> pattern;
  std::vector<double> scalars;
  /// max |target - evaluate(word)| over coordinates.
  double reconstruction_error = 0.0;
  double target_norm = 0.0;
  /// max_k |s_k| / ||v|| (letters have unit length); 0 for v = 0.
  double bound_ratio = 0.0;
  int restarts_used = 0;

  std::size_t size() const { return scalars.size(); }
  std::vector<std::pair<int, double>> entries() const;
  /// Adjacent letters with the same index summed; zero letters appended so
  /// the length is unchanged.
  DecompositionWord merged() const;
};

class DecompositionError : public SolverError {
 public:
  DecompositionError(const std::string& what, std::vector<double> best, double residual)
      : SolverError(what), best_iterate(std::move(best)), residual(residual) {}
  std::vector<double> best_iterate;
  double residual;
};

struct NewtonResult {
  std::vector<double> s;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

NewtonResult newton_solve(const FlowComposition& F, const Vector& target, std::vector<double> start,
                          int max_iterations = 60, double tolerance = 1e-13);

/// Solves for words of length 2n through a fixed anchor.
class Decomposer {
 public:
  Decomposer(GroupPtr group, HorizontalBasis basis, HomogeneousNorm norm, Anchor anchor);
  Decomposer(GroupPtr group, HorizontalBasis basis, HomogeneousNorm norm, const AnchorOptions& options = {});

  /// Rescales v to norm zeta, solves F(s) = delta_c v (Newton from s^,
  /// then 8 random restarts) and rescales the word. Throws
  /// DecompositionError carrying the best iterate.
  DecompositionWord decompose(const Vector& v, std::uint64_t seed = 7) const;

  const Anchor& anchor() const { return anchor_; }
  const FlowComposition& flow() const { return flow_; }
  const HorizontalBasis& basis() const { return basis_; }
  const HomogeneousNorm& norm() const { return norm_; }
  const GroupPtr& group() const { return group_; }

  /// The same anchor with another basis.
  Decomposer with_basis(HorizontalBasis basis) const;

 private:
  GroupPtr group_;
  HorizontalBasis basis_;
  HomogeneousNorm norm_;
  Anchor anchor_;
  FlowComposition flow_;
};

}  // namespace carnot
