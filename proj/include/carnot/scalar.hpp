#pragma once

// Scalar types and the fixed-capacity coordinate vector shared by every
// module. Group arithmetic is templated on the scalar so that residual and
// defect computations can run in quad precision: the homogeneous norm takes
// j-th roots of stratum-j coordinates, which turns a rounding error of e in
// the last stratum into e^(1/s) in norm units.

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace carnot {

using Quad = __float128;

inline constexpr std::size_t kMaxDim = 16;

namespace math {

inline double abs(double x) { return std::fabs(x); }
inline long double abs(long double x) { return std::fabs(x); }
inline Quad abs(Quad x) { return fabsq(x); }

inline double sqrt(double x) { return std::sqrt(x); }
inline long double sqrt(long double x) { return std::sqrt(x); }
inline Quad sqrt(Quad x) { return sqrtq(x); }

/// x^(1/k) for x >= 0.
inline double root(double x, int k) {
  if (k == 1) return x;
  if (k == 2) return std::sqrt(x);
  if (k == 3) return std::cbrt(x);
  return std::pow(x, 1.0 / k);
}
inline long double root(long double x, int k) {
  if (k == 1) return x;
  if (k == 2) return std::sqrt(x);
  if (k == 3) return std::cbrt(x);
  return std::pow(x, 1.0L / k);
}
inline Quad root(Quad x, int k) {
  if (k == 1) return x;
  if (k == 2) return sqrtq(x);
  if (k == 3) return cbrtq(x);
  return powq(x, Quad(1) / k);
}

template <class T>
T ipow(T x, int k) {
  T r = T(1);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace math

/// Coordinates of a group element or Lie algebra vector, stored inline.
template <class T>
class Coords {
 public:
  Coords() = default;
  explicit Coords(std::size_t n) : size_(n) {
    if (n > kMaxDim) throw std::length_error("Coords: dimension exceeds kMaxDim");
    data_.fill(T(0));
  }
  Coords(std::initializer_list<T> values) : Coords(values.size()) {
    std::copy(values.begin(), values.end(), data_.begin());
  }
  explicit Coords(const std::vector<T>& values) : Coords(values.size()) {
    std::copy(values.begin(), values.end(), data_.begin());
  }

  static Coords zero(std::size_t n) { return Coords(n); }

  std::size_t size() const { return size_; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T* begin() { return data_.data(); }
  T* end() { return data_.data() + size_; }
  const T* begin() const { return data_.data(); }
  const T* end() const { return data_.data() + size_; }

  template <class U>
  Coords<U> cast() const {
    Coords<U> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = static_cast<U>(data_[i]);
    return out;
  }

  std::vector<T> to_vector() const { return std::vector<T>(begin(), end()); }

  bool operator==(const Coords& other) const {
    if (size_ != other.size_) return false;
    for (std::size_t i = 0; i < size_; ++i)
      if (!(data_[i] == other.data_[i])) return false;
    return true;
  }

  Coords& operator+=(const Coords& o) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] += o.data_[i];
    return *this;
  }
  Coords& operator-=(const Coords& o) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Coords& operator*=(T s) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= s;
    return *this;
  }

 private:
  std::array<T, kMaxDim> data_{};
  std::size_t size_ = 0;
};

template <class T>
Coords<T> operator+(Coords<T> a, const Coords<T>& b) {
  return a += b;
}
template <class T>
Coords<T> operator-(Coords<T> a, const Coords<T>& b) {
  return a -= b;
}
template <class T>
Coords<T> operator-(Coords<T> a) {
  for (auto& x : a) x = -x;
  return a;
}
template <class T>
Coords<T> operator*(T s, Coords<T> a) {
  return a *= s;
}

template <class T>
T dot(const Coords<T>& a, const Coords<T>& b) {
  T s = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T euclidean_norm(const Coords<T>& a) {
  return math::sqrt(dot(a, a));
}

template <class T>
T max_abs(const Coords<T>& a) {
  T m = T(0);
  for (const auto& x : a) m = std::max(m, math::abs(x));
  return m;
}

using Vector = Coords<double>;
using QVector = Coords<Quad>;

}  // namespace carnot
