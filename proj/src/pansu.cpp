#include "carnot/pansu.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace carnot {

MapSampler MapSampler::translated_hom(const HomogeneousHom& L, const Vector& g) {
  MapSampler m;
  m.source = L.source();
  m.target = L.target();
  GroupPtr target = L.target();
  m.eval = [L, g, target](const Vector& x) { return target->multiply(g, L.apply(x)); };
  m.eval_quad = [L, g, target](const QVector& x) { return target->multiply(g.cast<Quad>(), L.apply(x)); };
  return m;
}

QVector MapSampler::quad(const QVector& x) const {
  if (eval_quad) return eval_quad(x);
  return eval(x.cast<double>()).cast<Quad>();
}

ResidualCurve::ResidualCurve(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].first < points_[i - 1].first)) throw DomainError("residual curve scales must strictly decrease");
}

double ResidualCurve::max_residual() const {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.second);
  return m;
}

std::optional<double> ResidualCurve::finest_decade_slope() const {
  if (points_.empty()) return std::nullopt;
  const double tmin = points_.back().first;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [t, r] : points_) {
    if (t > 10.0 * tmin * (1.0 + 1e-12) || !(r > 0.0)) continue;
    const double x = std::log(t), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

std::string ResidualCurve::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "scale,residual\n";
  for (const auto& [t, r] : points_) os << t << ',' << r << '\n';
  return os.str();
}

double pansu_residual(const MapSampler& f, const HomogeneousHom& L, const Vector& x0, const Vector& x,
                      const HomogeneousNorm& source_norm, const HomogeneousNorm& target_norm) {
  if (x == x0) throw DomainError("pansu_residual needs x != x0");
  const CarnotGroup& G = *f.source;
  const CarnotGroup& H = *f.target;
  const QVector qx0 = x0.cast<Quad>(), qx = x.cast<Quad>();
  const QVector step = G.difference(qx0, qx);
  const QVector fx0 = f.quad(qx0), fx = f.quad(qx);
  const QVector lhs = H.difference(L.apply(step), H.difference(fx0, fx));
  const Quad num = target_norm.value(lhs);
  const Quad den = source_norm.value(step);
  return static_cast<double>(num / den);
}

namespace {

// delta_{1/t}(f(x0)^{-1} f(x0 delta_t v)) in quad.
QVector quotient(const MapSampler& f, const QVector& x0, const QVector& fx0, const Vector& v, double t) {
  const CarnotGroup& G = *f.source;
  const CarnotGroup& H = *f.target;
  const QVector x = G.multiply(x0, G.dilate(Quad(t), v.cast<Quad>()));
  return H.dilate(Quad(1) / Quad(t), H.difference(fx0, f.quad(x)));
}

}  // namespace

PansuEstimate estimate_pansu_derivative(const MapSampler& f, const Vector& x0, std::vector<double> scales,
                                        const std::vector<Vector>& directions, const HomogeneousNorm& source_norm,
                                        const HomogeneousNorm& target_norm, const PansuOptions& options) {
  const GroupPtr& G = f.source;
  const GroupPtr& H = f.target;
  require_same_group(*G, *source_norm.group());
  require_same_group(*H, *target_norm.group());
  const int n1 = G->horizontal_dim();
  const int m1 = H->horizontal_dim();

  std::sort(scales.begin(), scales.end(), std::greater<>());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  if (scales.size() < 2 || !(scales.back() > 0.0)) throw DomainError("need at least two positive scales");
  if (scales.front() / scales.back() < 1000.0 * (1.0 - 1e-12))
    throw DomainError("scales must span at least three decades");

  Eigen::MatrixXd V(n1, static_cast<Eigen::Index>(directions.size()));
  std::vector<Vector> dirs;
  for (std::size_t k = 0; k < directions.size(); ++k) {
    Vector v = directions[k];
    if (static_cast<int>(v.size()) == n1) v = G->algebra().horizontal(v);
    if (static_cast<int>(v.size()) != G->dim()) throw SpecMismatch("direction has the wrong length");
    for (int i = n1; i < G->dim(); ++i)
      if (v[i] != 0.0) throw DomainError("directions must be horizontal");
    for (int i = 0; i < n1; ++i) V(i, static_cast<Eigen::Index>(k)) = v[i];
    dirs.push_back(v);
  }
  if (static_cast<int>(directions.size()) < n1 || Eigen::FullPivLU<Eigen::MatrixXd>(V).rank() < n1)
    throw DomainError("need at least " + std::to_string(n1) + " independent horizontal directions");

  const double t = scales.back();
  const QVector qx0 = x0.cast<Quad>();
  const QVector fx0 = f.quad(qx0);
  PansuEstimate est{HomogeneousHom::zero(G, H), {}, 0.0, std::nullopt, options.full_block, t};

  if (!options.full_block) {
    // Normal equations in quad, so that an exact morphism comes back with
    // its double entries unchanged.
    const auto K = static_cast<Eigen::Index>(dirs.size());
    std::vector<QVector> Y;
    for (std::size_t k = 0; k < dirs.size(); ++k) Y.push_back(quotient(f, qx0, fx0, dirs[k], t));
    QMatrix gram(static_cast<std::size_t>(n1), std::vector<Quad>(static_cast<std::size_t>(n1)));
    QMatrix rhs(static_cast<std::size_t>(n1), std::vector<Quad>(static_cast<std::size_t>(m1)));
    for (int a = 0; a < n1; ++a) {
      for (int b = 0; b < n1; ++b)
        for (Eigen::Index k = 0; k < K; ++k) gram[a][b] += Quad(V(a, k)) * Quad(V(b, k));
      for (int i = 0; i < m1; ++i)
        for (Eigen::Index k = 0; k < K; ++k) rhs[a][i] += Quad(V(a, k)) * Y[static_cast<std::size_t>(k)][i];
    }
    const QMatrix sol = solve_quad(gram, rhs);
    Eigen::MatrixXd a1(m1, n1);
    for (int i = 0; i < m1; ++i)
      for (int a = 0; a < n1; ++a) a1(i, a) = static_cast<double>(sol[a][i]);
    est.extension_defect = HomogeneousHom::extension_defect(G, H, a1);
    est.hom = HomogeneousHom::from_horizontal(G, H, a1, options.extension_tolerance);
  } else {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(H->dim(), G->dim());
    const int shared = std::min(G->step(), H->step());
    for (int i = 0; i < G->dim(); ++i) {
      const int j = G->algebra().degree(i);
      if (j > shared) continue;
      const QVector q = quotient(f, qx0, fx0, G->algebra().basis(i), t);
      for (int r = H->algebra().stratum_offset(j); r < H->algebra().stratum_offset(j) + H->algebra().stratum_dim(j);
           ++r)
        m(r, i) = static_cast<double>(q[r]);
    }
    est.hom = HomogeneousHom(G, H, m);
    est.extension_defect = HomogeneousHom::extension_defect(G, H, est.hom.block(1));
  }

  std::vector<std::pair<double, double>> pts;
  for (double s : scales) {
    double worst = 0.0;
    for (const auto& v : dirs) {
      const Vector x = G->multiply(x0, G->dilate(s, v));
      worst = std::max(worst, pansu_residual(f, est.hom, x0, x, source_norm, target_norm));
    }
    pts.emplace_back(s, worst);
  }
  est.curve = ResidualCurve(std::move(pts));
  est.slope = est.curve.finest_decade_slope();
  return est;
}

Vector assemble_differential(const CarnotGroup& target, const std::vector<Vector>& partials,
                             const std::vector<std::pair<int, double>>& word) {
  Vector out = target.identity();
  for (const auto& [i, lambda] : word) {
    if (i < 1 || i > static_cast<int>(partials.size()))
      throw DomainError("word index " + std::to_string(i) + " outside [1," + std::to_string(partials.size()) + "]");
    Vector p = partials[i - 1];
    if (static_cast<int>(p.size()) == target.horizontal_dim()) p = target.algebra().horizontal(p);
    if (lambda == 0.0) continue;
    out = target.multiply(out, target.dilate(lambda, p));
  }
  return out;
}

std::string to_string(HorizontalDifferentialReport::Status s) {
  switch (s) {
    case HorizontalDifferentialReport::Status::pass:
      return "pass";
    case HorizontalDifferentialReport::Status::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

HorizontalDifferentialReport check_horizontal_differential(const Eigen::MatrixXd& d_h, const MapSampler& f,
                                                           const MapSampler& phi,
                                                           const std::vector<Fragment>& fragments, const Vector& x,
                                                           double tolerance) {
  HorizontalDifferentialReport rep;
  const HomogeneousNorm fn = HomogeneousNorm::unit(f.target);
  const HomogeneousNorm pn = HomogeneousNorm::unit(phi.target);
  for (const auto& gamma : fragments) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < gamma.size(); ++i)
      if (max_abs(gamma.point(i) - x) < 1e-9) {
        hit = i;
        break;
      }
    if (!hit) continue;
    const double t0 = gamma.time(*hit);
    const Fragment fg = gamma.mapped(f.eval, f.target, [fn](const Vector& a, const Vector& b) {
      return fn.distance(a, b);
    });
    const Fragment pg = gamma.mapped(phi.eval, phi.target, [pn](const Vector& a, const Vector& b) {
      return pn.distance(a, b);
    });
    const auto df = fragment_derivative(fg, t0);
    const auto dp = fragment_derivative(pg, t0);
    if (!df || !dp) continue;
    Eigen::VectorXd v(static_cast<Eigen::Index>(dp->size()));
    for (std::size_t i = 0; i < dp->size(); ++i) v[static_cast<Eigen::Index>(i)] = (*dp)[i];
    const Eigen::VectorXd w = d_h * v;
    double sq = 0.0;
    for (std::size_t i = 0; i < df->size(); ++i) {
      const double e = (*df)[i] - w[static_cast<Eigen::Index>(i)];
      sq += e * e;
    }
    rep.defects.push_back(std::sqrt(sq));
  }
  if (rep.defects.empty()) return rep;
  rep.max_defect = *std::max_element(rep.defects.begin(), rep.defects.end());
  rep.status = rep.max_defect <= tolerance ? HorizontalDifferentialReport::Status::pass
                                           : HorizontalDifferentialReport::Status::fail;
  return rep;
}

}  // namespace carnot
