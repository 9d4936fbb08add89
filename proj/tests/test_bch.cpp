#include "doctest.h"

#include <map>
#include <numeric>
#include <vector>

#include "carnot/bch.hpp"

using namespace carnot;

namespace {

// Exact fractions for the oracle, independent of the library's Rational.
struct Frac {
  long long n = 0, d = 1;
  Frac(long long a = 0, long long b = 1) : n(a), d(b) {
    if (d < 0) n = -n, d = -d;
    const long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) n /= g, d /= g;
  }
  Frac operator+(const Frac& o) const { return {n * o.d + o.n * d, d * o.d}; }
  Frac operator*(const Frac& o) const { return {n * o.n, d * o.d}; }
  bool operator==(const Frac& o) const { return n == o.n && d == o.d; }
};

using Word = std::vector<int>;
using Poly = std::map<Word, Frac>;

void add(Poly& p, const Word& w, Frac c) {
  Frac s = p[w] + c;
  if (s.n == 0) p.erase(w); else p[w] = s;
}

Poly mul(const Poly& a, const Poly& b, std::size_t deg) {
  Poly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      if (wa.size() + wb.size() > deg) continue;
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      add(out, w, ca * cb);
    }
  return out;
}

Poly exp_letter(int letter, std::size_t deg) {
  Poly out;
  long long fact = 1;
  for (std::size_t k = 0; k <= deg; ++k) {
    if (k > 0) fact *= static_cast<long long>(k);
    add(out, Word(k, letter), Frac(1, fact));
  }
  return out;
}

// log(1 + Z) with Z the non-constant part.
Poly log_series(const Poly& p, std::size_t deg) {
  Poly z = p;
  z.erase(Word{});
  Poly out, power = z;
  for (std::size_t k = 1; k <= deg; ++k) {
    for (const auto& [w, c] : power) add(out, w, c * Frac(k % 2 ? 1 : -1, static_cast<long long>(k)));
    power = mul(power, z, deg);
  }
  return out;
}

// Right-nested bracket of letters, expanded associatively.
Poly expand(const std::vector<int>& letters) {
  Poly cur;
  add(cur, Word{letters.back()}, Frac(1));
  for (std::size_t i = letters.size() - 1; i-- > 0;) {
    Poly next;
    for (const auto& [w, c] : cur) {
      Word l{letters[i]};
      l.insert(l.end(), w.begin(), w.end());
      Word r = w;
      r.push_back(letters[i]);
      add(next, l, c);
      add(next, r, c * Frac(-1));
    }
    cur = next;
  }
  return cur;
}

}  // namespace

TEST_CASE("BCH series matches log(exp X exp Y) in the free algebra") {
  for (int depth = 1; depth <= 6; ++depth) {
    CAPTURE(depth);
    const auto d = static_cast<std::size_t>(depth);
    const Poly want = log_series(mul(exp_letter(0, d), exp_letter(1, d), d), d);
    BchSeries bch(depth);
    Poly got;
    add(got, Word{0}, Frac(1));
    add(got, Word{1}, Frac(1));
    for (const auto& t : bch.terms()) {
      if (t.word.size() < 2) continue;
      const Frac c(static_cast<long long>(t.coefficient.num), static_cast<long long>(t.coefficient.den));
      for (const auto& [w, e] : expand(t.word)) add(got, w, c * e);
    }
    CHECK(got.size() == want.size());
    for (const auto& [w, c] : want) {
      auto it = got.find(w);
      REQUIRE(it != got.end());
      CHECK(it->second == c);
    }
  }
}

TEST_CASE("low-order coefficients") {
  BchSeries bch(3);
  // Degree two: 1/2 [X,Y]; degree three: 1/12 [X,[X,Y]] - 1/12 [Y,[X,Y]].
  std::map<std::vector<int>, double> c;
  for (const auto& t : bch.terms()) c[t.word] = t.coefficient.to_double();
  CHECK(c[{0, 1}] == doctest::Approx(0.5));
  CHECK(c[{0, 0, 1}] == doctest::Approx(1.0 / 12));
  CHECK(c[{1, 0, 1}] == doctest::Approx(-1.0 / 12));
}

TEST_CASE("Rational arithmetic reduces") {
  Rational a(2, 4), b(1, 3);
  CHECK(a == Rational(1, 2));
  CHECK(a + b == Rational(5, 6));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 6));
  CHECK(a / b == Rational(3, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
}
