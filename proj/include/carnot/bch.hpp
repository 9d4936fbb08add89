#pragma once

#include <cstdint>
#include <type_traits>
#include <vector>

#include "carnot/scalar.hpp"

namespace carnot {

/// Exact rational with 128-bit intermediates, always reduced, den > 0.
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  Rational() = default;
  Rational(__int128 n, __int128 d = 1);
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return {-num, den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  Quad to_quad() const { return static_cast<Quad>(num) / static_cast<Quad>(den); }
};

/// log(exp X exp Y) truncated at bracket depth `depth`, written as a sum of
/// right-nested brackets [w1,[w2,[...,[w_{m-1},w_m]]]] over letters X=0, Y=1.
/// Built from the Dynkin series; words are put in the form ...XY before
/// like terms are merged, so each surviving word appears once.
class BchSeries {
 public:
  struct Term {
    std::vector<int> word;
    Rational coefficient;
  };

  explicit BchSeries(int depth);

  int depth() const { return depth_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Evaluates the series; `br` computes the Lie bracket of two Coords<T>.
  template <class T, class Bracket>
  Coords<T> evaluate(const Coords<T>& x, const Coords<T>& y, const Bracket& br) const {
    std::vector<Coords<T>> val(nodes_.size());
    val[0] = x;
    val[1] = y;
    for (std::size_t i = 2; i < nodes_.size(); ++i) {
      const Node& nd = nodes_[i];
      val[i] = br(val[nd.letter], val[nd.child]);
    }
    Coords<T> out = x + y;
    for (const auto& p : plan_) {
      if (p.node < 2) continue;
      out += coefficient<T>(p) * val[p.node];
    }
    return out;
  }

  /// The bracket terms alone, summed from zero, so that coordinates the
  /// brackets never reach come out as exact zeros.
  template <class T, class Bracket>
  Coords<T> correction(const Coords<T>& x, const Coords<T>& y, const Bracket& br) const {
    std::vector<Coords<T>> val(nodes_.size());
    val[0] = x;
    val[1] = y;
    for (std::size_t i = 2; i < nodes_.size(); ++i) val[i] = br(val[nodes_[i].letter], val[nodes_[i].child]);
    Coords<T> out(x.size());
    for (const auto& p : plan_) {
      if (p.node < 2) continue;
      out += coefficient<T>(p) * val[p.node];
    }
    return out;
  }

  /// Componentwise bound on |evaluate(x,y) - x - y| given |x| <= xa, |y| <= ya.
  template <class T, class BracketBound>
  Coords<T> remainder_bound(const Coords<T>& xa, const Coords<T>& ya, const BracketBound& bb) const {
    std::vector<Coords<T>> val(nodes_.size());
    val[0] = xa;
    val[1] = ya;
    for (std::size_t i = 2; i < nodes_.size(); ++i) val[i] = bb(val[nodes_[i].letter], val[nodes_[i].child]);
    Coords<T> out(xa.size());
    for (const auto& p : plan_) {
      if (p.node < 2) continue;
      out += math::abs(coefficient<T>(p)) * val[p.node];
    }
    return out;
  }

 private:
  struct Node {
    int letter;  // 0 or 1 (leaf index it brackets with from the left)
    int child;
  };
  struct PlanEntry {
    int node;
    double cd;
    long double cl;
    Quad cq;
  };

  template <class T>
  static T coefficient(const PlanEntry& p) {
    if constexpr (std::is_same_v<T, double>) {
      return p.cd;
    } else if constexpr (std::is_same_v<T, long double>) {
      return p.cl;
    } else {
      return p.cq;
    }
  }

  int depth_;
  std::vector<Term> terms_;
  std::vector<Node> nodes_;
  std::vector<PlanEntry> plan_;
};

}  // namespace carnot
