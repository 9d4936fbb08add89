#include "carnot/bch.hpp"

#include <map>
#include <stdexcept>

namespace carnot {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

__int128 factorial(int k) {
  __int128 f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Dynkin coefficient of the right-nested bracket of `w`: sum over splittings
// of w into blocks X^r Y^s (r+s > 0), weighted by (-1)^(k-1)/k / prod(r!s!),
// divided by the total degree.
Rational dynkin_coefficient(const std::vector<int>& w) {
  const int m = static_cast<int>(w.size());
  std::vector<std::vector<Rational>> f(m + 1, std::vector<Rational>(m + 1));
  f[0][0] = Rational(1);
  for (int p = 0; p < m; ++p) {
    for (int k = 0; k < m; ++k) {
      if (f[p][k].is_zero()) continue;
      int r = 0, s = 0;
      for (int q = p; q < m; ++q) {
        if (w[q] == 0) {
          if (s > 0) break;
          ++r;
        } else {
          ++s;
        }
        f[q + 1][k + 1] = f[q + 1][k + 1] + f[p][k] / Rational(factorial(r) * factorial(s));
      }
    }
  }
  Rational total;
  for (int k = 1; k <= m; ++k) {
    if (f[m][k].is_zero()) continue;
    Rational term = f[m][k] / Rational(k);
    total = (k % 2 == 1) ? total + term : total - term;
  }
  return total / Rational(m);
}

}  // namespace

Rational::Rational(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num = n;
  den = d;
}

Rational Rational::operator+(const Rational& o) const {
  __int128 g = gcd128(den, o.den);
  return Rational(num * (o.den / g) + o.num * (den / g), den / g * o.den);
}
Rational Rational::operator-(const Rational& o) const { return *this + (-o); }
Rational Rational::operator*(const Rational& o) const {
  __int128 g1 = gcd128(num, o.den), g2 = gcd128(o.num, den);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
}
Rational Rational::operator/(const Rational& o) const { return *this * Rational(o.den, o.num); }

BchSeries::BchSeries(int depth) : depth_(depth) {
  if (depth < 1 || depth > static_cast<int>(kMaxDim))
    throw std::invalid_argument("BchSeries: depth must lie in [1, " + std::to_string(kMaxDim) + "]");

  std::map<std::vector<int>, Rational> merged;
  for (int m = 1; m <= depth; ++m) {
    for (unsigned bits = 0; bits < (1u << m); ++bits) {
      std::vector<int> w(m);
      for (int i = 0; i < m; ++i) w[i] = (bits >> (m - 1 - i)) & 1u;
      Rational c = dynkin_coefficient(w);
      if (c.is_zero()) continue;
      if (m >= 2) {
        if (w[m - 2] == w[m - 1]) continue;
        if (w[m - 2] == 1) {
          std::swap(w[m - 2], w[m - 1]);
          c = -c;
        }
      }
      merged[w] = merged[w] + c;
    }
  }

  nodes_.push_back({-1, -1});
  nodes_.push_back({-1, -1});
  std::map<std::pair<int, int>, int> index;
  for (const auto& [w, c] : merged) {
    if (c.is_zero()) continue;
    terms_.push_back({w, c});
    int node = w.back();
    for (int i = static_cast<int>(w.size()) - 2; i >= 0; --i) {
      auto key = std::make_pair(w[i], node);
      auto it = index.find(key);
      if (it == index.end()) {
        nodes_.push_back({w[i], node});
        it = index.emplace(key, static_cast<int>(nodes_.size()) - 1).first;
      }
      node = it->second;
    }
    plan_.push_back({node, c.to_double(), static_cast<long double>(c.num) / static_cast<long double>(c.den),
                     c.to_quad()});
  }
}

}  // namespace carnot
