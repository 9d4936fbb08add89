#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/group.hpp"
#include "carnot/norm.hpp"

namespace carnot {

/// V_1 data that does not extend to a stratified morphism.
class ExtensionError : public SolverError {
 public:
  ExtensionError(const std::string& what, double defect, int stratum)
      : SolverError(what), defect(defect), stratum(stratum) {}
  double defect;
  int stratum;
};

/// A graded linear map G -> H acting on exponential coordinates. Block j
/// sends V_j(G) to V_j(H) for j <= min(s_G, s_H); everything else is zero.
class HomogeneousHom {
 public:
  /// Throws SpecMismatch for a wrong shape or nonzero off-stratum entries.
  HomogeneousHom(GroupPtr source, GroupPtr target, Eigen::MatrixXd matrix);

  static HomogeneousHom identity(GroupPtr g);
  static HomogeneousHom dilation(GroupPtr g, double lambda);
  static HomogeneousHom zero(GroupPtr source, GroupPtr target);
  /// blocks[j-1] is V_j(G) -> V_j(H).
  static HomogeneousHom from_blocks(GroupPtr source, GroupPtr target, const std::vector<Eigen::MatrixXd>& blocks);
  /// Determines the higher blocks from A_1 through [A_1 X_a, A_j X_b] =
  /// A_{j+1}[X_a, X_b]. Throws ExtensionError when the least-squares
  /// defect (relative to the bracket magnitudes) exceeds `tolerance`.
  static HomogeneousHom from_horizontal(GroupPtr source, GroupPtr target, const Eigen::MatrixXd& a1,
                                        double tolerance = 1e-9);
  /// Relative defect of extending A_1; 0 for a morphism.
  static double extension_defect(const GroupPtr& source, const GroupPtr& target, const Eigen::MatrixXd& a1);

  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  int shared_step() const;
  Eigen::MatrixXd block(int j) const;

  template <class T>
  Coords<T> apply(const Coords<T>& x) const {
    Coords<T> out(static_cast<std::size_t>(m_.rows()));
    for (Eigen::Index r = 0; r < m_.rows(); ++r) {
      T acc = T(0);
      for (Eigen::Index c = 0; c < m_.cols(); ++c)
        if (m_(r, c) != 0.0) acc += T(m_(r, c)) * x[static_cast<std::size_t>(c)];
      out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
  }

  /// Maximum absolute difference between corresponding entries.
  double max_block_difference(const HomogeneousHom& other) const;

 private:
  GroupPtr source_, target_;
  Eigen::MatrixXd m_;
};

using QMatrix = std::vector<std::vector<Quad>>;

/// Solves M X = B for square M by Gaussian elimination with partial
/// pivoting. Throws SolverError when M is singular.
QMatrix solve_quad(QMatrix m, QMatrix b);

struct HomResidualReport {
  double morphism_residual = 0.0;
  double dilation_residual = 0.0;
  std::size_t samples = 0;
  bool valid = false;
};

inline constexpr double kHomTolerance = 1e-8;

/// Residuals of L(pq) = L(p)L(q) and L(delta_lambda p) = delta_lambda L(p)
/// measured in `target_norm`, evaluated in quad precision.
HomResidualReport validate_hom(const HomogeneousHom& L, const HomogeneousNorm& target_norm, std::size_t samples,
                               std::uint64_t seed = 11);

/// max ||L v|| over `sphere_samples` points of the unit sphere of the source
/// norm. Samples are drawn sequentially so that a longer run extends a
/// shorter one.
double hom_norm(const HomogeneousHom& L, const HomogeneousNorm& source_norm, const HomogeneousNorm& target_norm,
                std::size_t sphere_samples, std::uint64_t seed = 13);

}  // namespace carnot
