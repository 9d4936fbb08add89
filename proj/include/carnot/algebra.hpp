#pragma once

#include <string>
#include <vector>

#include "carnot/scalar.hpp"

namespace carnot {

/// [X_i, X_j] has coefficient c on X_k. Indices are 1-based.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
  bool operator==(const StructureConstant&) const = default;
};

struct StratificationSpec {
  std::string name;
  std::vector<int> strata;
  std::vector<StructureConstant> brackets;

  int dimension() const;
  int step() const { return static_cast<int>(strata.size()); }
};

/// Same strata and the same normalized bracket table; names are ignored.
bool same_structure(const StratificationSpec& a, const StratificationSpec& b);

struct Violation {
  std::string invariant;  // "antisymmetry", "grading", "jacobi", "generation"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& invariant) const;
  std::string summary() const;
};

inline constexpr double kAlgebraTolerance = 1e-12;

/// Throws SpecError for structural problems (empty or non-positive strata,
/// indices outside [1,n], n above kMaxDim). Invariant failures go into the
/// report instead.
ValidationReport validate_stratification(const StratificationSpec& spec);

/// A validated stratified Lie algebra with its bracket in the adapted basis.
class Algebra {
 public:
  /// Entry with a < b (0-based) after antisymmetric closure.
  struct Entry {
    int a, b, k;
    double c;
  };

  /// Throws SpecError when the stratification is malformed or violates an invariant.
  explicit Algebra(StratificationSpec spec);

  const StratificationSpec& spec() const { return spec_; }
  int dim() const { return n_; }
  int step() const { return static_cast<int>(spec_.strata.size()); }
  /// Dimension of stratum j, 1-based.
  int stratum_dim(int j) const { return spec_.strata[j - 1]; }
  /// First 0-based coordinate of stratum j, 1-based.
  int stratum_offset(int j) const { return offsets_[j - 1]; }
  /// Stratum (1-based) of 0-based coordinate i.
  int degree(int i) const { return degree_[i]; }
  int homogeneous_dimension() const;
  const std::vector<Entry>& entries() const { return entries_; }

  template <class T>
  Coords<T> bracket(const Coords<T>& u, const Coords<T>& v) const {
    Coords<T> out(static_cast<std::size_t>(n_));
    for (const auto& e : entries_) {
      const T w = u[e.a] * v[e.b] - u[e.b] * v[e.a];
      if (w != T(0)) out[e.k] += T(e.c) * w;
    }
    return out;
  }

  /// Componentwise bound |[u,v]| <= bracket_bound(|u|, |v|).
  template <class T>
  Coords<T> bracket_bound(const Coords<T>& u, const Coords<T>& v) const {
    Coords<T> out(static_cast<std::size_t>(n_));
    for (const auto& e : entries_)
      out[e.k] += T(std::fabs(e.c)) * (u[e.a] * v[e.b] + u[e.b] * v[e.a]);
    return out;
  }

  /// Stratum-j part of v with all other coordinates zeroed.
  template <class T>
  Coords<T> project(const Coords<T>& v, int j) const {
    Coords<T> out(v.size());
    for (int i = stratum_offset(j); i < stratum_offset(j) + stratum_dim(j); ++i) out[i] = v[i];
    return out;
  }

  /// Stratum-j coordinates only, as a vector of length n_j.
  template <class T>
  Coords<T> stratum(const Coords<T>& v, int j) const {
    Coords<T> out(static_cast<std::size_t>(stratum_dim(j)));
    for (int i = 0; i < stratum_dim(j); ++i) out[i] = v[stratum_offset(j) + i];
    return out;
  }

  /// Embeds a V_1 vector (length n_1) as a full coordinate vector.
  Vector horizontal(const Vector& v1) const;

  Vector basis(int i) const;

 private:
  StratificationSpec spec_;
  int n_ = 0;
  std::vector<int> offsets_;
  std::vector<int> degree_;
  std::vector<Entry> entries_;
};

int homogeneous_dimension(const StratificationSpec& spec);

}  // namespace carnot
