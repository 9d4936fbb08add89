#pragma once

#include <memory>
#include <string>

#include "carnot/algebra.hpp"
#include "carnot/bch.hpp"

namespace carnot {

class CarnotGroup;
using GroupPtr = std::shared_ptr<const CarnotGroup>;

/// Group law in exponential coordinates of the first kind.
class CarnotGroup {
 public:
  static GroupPtr create(StratificationSpec spec);

  const Algebra& algebra() const { return algebra_; }
  const StratificationSpec& spec() const { return algebra_.spec(); }
  const std::string& name() const { return algebra_.spec().name; }
  int dim() const { return algebra_.dim(); }
  int step() const { return algebra_.step(); }
  int horizontal_dim() const { return algebra_.stratum_dim(1); }
  int homogeneous_dimension() const { return algebra_.homogeneous_dimension(); }
  const BchSeries& bch() const { return bch_; }

  template <class T>
  Coords<T> multiply(const Coords<T>& p, const Coords<T>& q) const {
    return bch_.evaluate(p, q, [this](const Coords<T>& a, const Coords<T>& b) { return algebra_.bracket(a, b); });
  }

  /// Q(p, q) = pq - p - q, computed from the bracket terms only.
  template <class T>
  Coords<T> correction(const Coords<T>& p, const Coords<T>& q) const {
    return bch_.correction(p, q, [this](const Coords<T>& a, const Coords<T>& b) { return algebra_.bracket(a, b); });
  }

  template <class T>
  Coords<T> inverse(const Coords<T>& p) const {
    return -p;
  }

  /// Stratum j scaled by lambda^j. Throws DomainError for lambda = 0.
  template <class T>
  Coords<T> dilate(T lambda, const Coords<T>& p) const {
    check_lambda(static_cast<double>(lambda));
    Coords<T> out = p;
    T f = lambda;
    for (int j = 1; j <= step(); ++j) {
      for (int i = algebra_.stratum_offset(j); i < algebra_.stratum_offset(j) + algebra_.stratum_dim(j); ++i)
        out[i] *= f;
      f *= lambda;
    }
    return out;
  }

  /// p^{-1} q.
  template <class T>
  Coords<T> difference(const Coords<T>& p, const Coords<T>& q) const {
    return multiply(inverse(p), q);
  }

  /// Componentwise bound on |p q| given |p| <= pa and |q| <= qa.
  Vector product_bound(const Vector& pa, const Vector& qa) const;

  Vector identity() const { return Vector(static_cast<std::size_t>(dim())); }

  bool same_as(const CarnotGroup& other) const;

 private:
  explicit CarnotGroup(StratificationSpec spec);
  static void check_lambda(double lambda);

  Algebra algebra_;
  BchSeries bch_;
};

void require_same_group(const CarnotGroup& a, const CarnotGroup& b);

/// An element of a group together with the group it lives in.
class GroupPoint {
 public:
  GroupPoint(GroupPtr group, Vector coords);
  static GroupPoint identity(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  const Vector& coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  GroupPoint operator*(const GroupPoint& other) const;
  GroupPoint inverse() const;
  GroupPoint dilate(double lambda) const;

 private:
  GroupPtr group_;
  Vector coords_;
};

}  // namespace carnot
