#include "carnot/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace carnot {

HorizontalBasis::HorizontalBasis(const CarnotGroup& group, std::vector<Vector> vectors) {
  const int n1 = group.horizontal_dim();
  if (static_cast<int>(vectors.size()) != n1)
    throw DomainError("basis needs exactly " + std::to_string(n1) + " vectors");
  Eigen::MatrixXd m(n1, n1);
  for (int k = 0; k < n1; ++k) {
    Vector v = vectors[k];
    if (static_cast<int>(v.size()) == group.dim()) v = group.algebra().stratum(v, 1);
    if (static_cast<int>(v.size()) != n1) throw SpecMismatch("basis vector has the wrong length");
    const double len = euclidean_norm(v);
    if (len == 0.0) throw DomainError("basis vectors must be nonzero");
    v *= 1.0 / len;
    for (int i = 0; i < n1; ++i) m(i, k) = v[i];
    v_.push_back(v);
    full_.push_back(group.algebra().horizontal(v));
  }
  if (numerical_rank(m) < n1) throw DomainError("basis does not span the horizontal layer");
}

HorizontalBasis HorizontalBasis::standard(const CarnotGroup& group) {
  std::vector<Vector> v;
  for (int i = 0; i < group.horizontal_dim(); ++i) {
    Vector e(static_cast<std::size_t>(group.horizontal_dim()));
    e[i] = 1.0;
    v.push_back(e);
  }
  return HorizontalBasis(group, v);
}

Vector evaluate_word(const CarnotGroup& group, const HorizontalBasis& basis, const std::vector<int>& pattern,
                     const std::vector<double>& scalars) {
  if (pattern.size() != scalars.size()) throw DomainError("pattern and scalars differ in length");
  Vector out = group.identity();
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (pattern[k] < 1 || pattern[k] > static_cast<int>(basis.size())) throw DomainError("letter index out of range");
    if (scalars[k] == 0.0) continue;
    out = group.multiply(out, scalars[k] * basis.letter(pattern[k]));
  }
  return out;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / sv[sv.size() - 1];
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++r;
  return r;
}

FlowComposition::FlowComposition(GroupPtr group, HorizontalBasis basis, std::vector<int> pattern,
                                 std::vector<double> anchor)
    : group_(std::move(group)), basis_(std::move(basis)), pattern_(std::move(pattern)), anchor_(std::move(anchor)) {
  const int n = group_->dim();
  if (static_cast<int>(pattern_.size()) != n || static_cast<int>(anchor_.size()) != n)
    throw DomainError("pattern and anchor must have length " + std::to_string(n));
  for (int i : pattern_)
    if (i < 1 || i > static_cast<int>(basis_.size())) throw DomainError("pattern index out of range");
  tail_ = group_->inverse(evaluate_word(*group_, basis_, pattern_, anchor_));
}

Vector FlowComposition::operator()(const std::vector<double>& s) const {
  return group_->multiply(evaluate_word(*group_, basis_, pattern_, s), tail_);
}

Eigen::MatrixXd FlowComposition::jacobian(const std::vector<double>& s, double h) const {
  const int n = group_->dim();
  Eigen::MatrixXd J(n, n);
  for (int k = 0; k < n; ++k) {
    auto sp = s, sm = s;
    sp[k] += h;
    sm[k] -= h;
    const Vector d = (*this)(sp) - (*this)(sm);
    for (int r = 0; r < n; ++r) J(r, k) = d[r] / (2.0 * h);
  }
  return J;
}

NewtonResult newton_solve(const FlowComposition& F, const Vector& target, std::vector<double> s, int max_iterations,
                          double tolerance) {
  const int n = static_cast<int>(s.size());
  NewtonResult res;
  Vector r = F(s) - target;
  double err = max_abs(r);
  // Keeps polishing past the tolerance while the residual still drops.
  for (int it = 0; it < max_iterations && err > 1e-3 * tolerance; ++it) {
    res.iterations = it + 1;
    const Eigen::MatrixXd J = F.jacobian(s);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = r[i];
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(rhs);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool improved = false;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      auto trial = s;
      for (int i = 0; i < n; ++i) trial[i] -= t * step[i];
      const Vector rt = F(trial) - target;
      const double et = max_abs(rt);
      if (et < err) {
        s = trial;
        r = rt;
        err = et;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  res.s = s;
  res.residual = err;
  res.converged = err <= tolerance;
  return res;
}

namespace {

std::vector<std::vector<int>> candidate_patterns(int n, int n1, int budget) {
  std::vector<std::vector<int>> out;
  std::vector<int> cyc(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) cyc[k] = k % n1 + 1;
  if (n >= n1) out.push_back(cyc);
  std::vector<int> p(static_cast<std::size_t>(n), 1);
  for (;;) {
    if (static_cast<int>(out.size()) >= budget) break;
    std::vector<bool> hit(static_cast<std::size_t>(n1), false);
    for (int i : p) hit[i - 1] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }) && p != cyc) out.push_back(p);
    int i = n - 1;
    while (i >= 0 && ++p[i] > n1) p[i--] = 1;
    if (i < 0) break;
  }
  return out;
}

Vector scaled_target(const CarnotGroup& g, const HomogeneousNorm& norm, Rng& rng, double zeta) {
  return g.dilate(zeta, norm.sample_unit_sphere(rng));
}

}  // namespace

Anchor select_anchor(const GroupPtr& group, const HorizontalBasis& basis, const HomogeneousNorm& norm,
                     const AnchorOptions& opt) {
  const int n = group->dim();
  const int n1 = group->horizontal_dim();
  Rng rng = make_rng(opt.seed, 0);
  Anchor best;
  best.condition = std::numeric_limits<double>::infinity();
  const auto patterns = candidate_patterns(n, n1, opt.pattern_search_budget);
  for (const auto& pat : patterns) {
    ++best.patterns_tried;
    bool found = false;
    for (int a = 0; a < opt.anchors_per_pattern; ++a) {
      std::vector<double> s(static_cast<std::size_t>(n));
      for (auto& x : s) x = uniform(rng, 0.2, 0.8);
      FlowComposition F(group, basis, pat, s);
      const double c = condition_number(F.jacobian(s));
      if (c < opt.max_condition && c < best.condition) {
        best.pattern = pat;
        best.s_hat = s;
        best.condition = c;
        found = true;
      }
    }
    if (found) break;
  }
  if (best.pattern.empty())
    throw SolverError("no index pattern with a nonsingular anchor within a budget of " +
                      std::to_string(opt.pattern_search_budget) + " patterns");

  FlowComposition F(group, basis, best.pattern, best.s_hat);
  double zeta = 1.0;
  for (; zeta > 1e-4; zeta *= 0.5) {
    Rng zr = make_rng(opt.seed, 1);
    bool ok = true;
    for (int k = 0; k < opt.zeta_samples && ok; ++k) {
      const Vector t = scaled_target(*group, norm, zr, zeta);
      ok = newton_solve(F, t, best.s_hat).converged;
    }
    if (ok) break;
  }
  if (zeta <= 1e-4) throw SolverError("could not certify a Newton radius around the anchor");
  best.zeta = 0.5 * zeta;
  return best;
}

std::vector<std::pair<int, double>> DecompositionWord::entries() const {
  std::vector<std::pair<int, double>> e;
  for (std::size_t k = 0; k < pattern.size(); ++k) e.emplace_back(pattern[k], scalars[k]);
  return e;
}

DecompositionWord DecompositionWord::merged() const {
  DecompositionWord m = *this;
  m.pattern.clear();
  m.scalars.clear();
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (!m.pattern.empty() && m.pattern.back() == pattern[k]) {
      m.scalars.back() += scalars[k];
    } else {
      m.pattern.push_back(pattern[k]);
      m.scalars.push_back(scalars[k]);
    }
  }
  while (m.pattern.size() < pattern.size()) {
    m.pattern.push_back(m.pattern.empty() ? 1 : m.pattern.back());
    m.scalars.push_back(0.0);
  }
  return m;
}

Decomposer::Decomposer(GroupPtr group, HorizontalBasis basis, HomogeneousNorm norm, Anchor anchor)
    : group_(group),
      basis_(basis),
      norm_(std::move(norm)),
      anchor_(std::move(anchor)),
      flow_(group, basis, anchor_.pattern, anchor_.s_hat) {}

Decomposer::Decomposer(GroupPtr group, HorizontalBasis basis, HomogeneousNorm norm, const AnchorOptions& options)
    : Decomposer(group, basis, norm, select_anchor(group, basis, norm, options)) {}

Decomposer Decomposer::with_basis(HorizontalBasis basis) const {
  return Decomposer(group_, std::move(basis), norm_, anchor_);
}

DecompositionWord Decomposer::decompose(const Vector& v, std::uint64_t seed) const {
  const CarnotGroup& g = *group_;
  const int n = g.dim();
  if (static_cast<int>(v.size()) != n) throw SpecMismatch("target has the wrong dimension");
  const double nv = norm_(v);
  const double c = nv > 0.0 ? anchor_.zeta / nv : 1.0;
  const Vector target = nv > 0.0 ? g.dilate(c, v) : g.identity();

  NewtonResult best = newton_solve(flow_, target, anchor_.s_hat);
  int restarts = 0;
  if (!best.converged) {
    Rng rng = make_rng(seed, 0);
    for (int r = 0; r < 8 && !best.converged; ++r) {
      ++restarts;
      std::vector<double> start(static_cast<std::size_t>(n));
      for (auto& x : start) x = uniform(rng, 0.0, 1.0);
      NewtonResult trial = newton_solve(flow_, target, start);
      if (trial.residual < best.residual) best = trial;
    }
  }
  if (!best.converged) {
    std::ostringstream os;
    os << "Newton did not converge after 8 restarts; best residual " << best.residual;
    throw DecompositionError(os.str(), best.s, best.residual);
  }

  DecompositionWord w;
  w.restarts_used = restarts;
  for (int k = 0; k < n; ++k) {
    w.pattern.push_back(anchor_.pattern[k]);
    w.scalars.push_back(best.s[k] / c);
  }
  for (int k = n - 1; k >= 0; --k) {
    w.pattern.push_back(anchor_.pattern[k]);
    w.scalars.push_back(-anchor_.s_hat[k] / c);
  }
  w.target_norm = nv;
  w.reconstruction_error = max_abs(evaluate_word(g, basis_, w.pattern, w.scalars) - v);
  double smax = 0.0;
  for (double x : w.scalars) smax = std::max(smax, std::fabs(x));
  w.bound_ratio = nv > 0.0 ? smax / nv : 0.0;
  return w;
}

}  // namespace carnot
