#include "carnot/hom.hpp"

#include <cmath>
#include <sstream>

namespace carnot {

QMatrix solve_quad(QMatrix m, QMatrix b) {
  const std::size_t k = m.size();
  const std::size_t cols = k ? b[0].size() : 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (fabsq(m[r][c]) > fabsq(m[piv][c])) piv = r;
    if (m[piv][c] == 0) throw SolverError("singular Gram matrix");
    std::swap(m[c], m[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Quad f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < k; ++j) m[r][j] -= f * m[c][j];
      for (std::size_t j = 0; j < cols; ++j) b[r][j] -= f * b[c][j];
    }
  }
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < cols; ++j) b[r][j] /= m[r][r];
  return b;
}

namespace {

struct Propagation {
  Eigen::MatrixXd matrix;
  double defect = 0.0;
  int stratum = 0;
};

Propagation propagate(const GroupPtr& G, const GroupPtr& H, const Eigen::MatrixXd& a1) {
  const Algebra& ga = G->algebra();
  const Algebra& ha = H->algebra();
  if (a1.rows() != ha.stratum_dim(1) || a1.cols() != ga.stratum_dim(1)) {
    std::ostringstream os;
    os << "V1 block must be " << ha.stratum_dim(1) << "x" << ga.stratum_dim(1) << ", got " << a1.rows() << "x"
       << a1.cols();
    throw SpecMismatch(os.str());
  }
  const int sg = G->step(), sh = H->step();
  const int shared = std::min(sg, sh);
  // Full matrix kept in quad while propagating.
  std::vector<std::vector<Quad>> L(static_cast<std::size_t>(H->dim()),
                                   std::vector<Quad>(static_cast<std::size_t>(G->dim()), Quad(0)));
  for (int r = 0; r < a1.rows(); ++r)
    for (int c = 0; c < a1.cols(); ++c) L[r][c] = a1(r, c);

  auto applyL = [&](const QVector& x) {
    QVector y(static_cast<std::size_t>(H->dim()));
    for (int r = 0; r < H->dim(); ++r) {
      Quad acc = 0;
      for (int c = 0; c < G->dim(); ++c) acc += L[r][c] * x[c];
      y[r] = acc;
    }
    return y;
  };

  Propagation out;
  for (int j = 1; j <= std::min(sg, sh - 1); ++j) {
    const int rg = j + 1 <= sg ? ga.stratum_dim(j + 1) : 0;
    const int rh = ha.stratum_dim(j + 1);
    std::vector<QVector> wcols, tcols;
    for (int a = 0; a < ga.stratum_dim(1); ++a)
      for (int b = ga.stratum_offset(j); b < ga.stratum_offset(j) + ga.stratum_dim(j); ++b) {
        QVector xa(static_cast<std::size_t>(G->dim())), xb(static_cast<std::size_t>(G->dim()));
        xa[a] = 1;
        xb[b] = 1;
        QVector w = ga.bracket(xa, xb);
        QVector t = ha.bracket(applyL(xa), applyL(xb));
        QVector wc(static_cast<std::size_t>(rg)), tc(static_cast<std::size_t>(rh));
        for (int r = 0; r < rg; ++r) wc[r] = w[ga.stratum_offset(j + 1) + r];
        for (int r = 0; r < rh; ++r) tc[r] = t[ha.stratum_offset(j + 1) + r];
        wcols.push_back(wc);
        tcols.push_back(tc);
      }
    Quad tmax = 0;
    for (const auto& t : tcols)
      for (auto v : t) tmax = std::max(tmax, fabsq(v));
    QMatrix A(static_cast<std::size_t>(rh), std::vector<Quad>(static_cast<std::size_t>(rg), Quad(0)));
    if (rg > 0) {
      QMatrix gram(static_cast<std::size_t>(rg), std::vector<Quad>(static_cast<std::size_t>(rg), Quad(0)));
      QMatrix rhs(static_cast<std::size_t>(rg), std::vector<Quad>(static_cast<std::size_t>(rh), Quad(0)));
      for (std::size_t p = 0; p < wcols.size(); ++p)
        for (int r = 0; r < rg; ++r) {
          for (int c = 0; c < rg; ++c) gram[r][c] += wcols[p][r] * wcols[p][c];
          for (int c = 0; c < rh; ++c) rhs[r][c] += wcols[p][r] * tcols[p][c];
        }
      QMatrix At = solve_quad(gram, rhs);  // rg x rh, the transpose of A
      for (int r = 0; r < rh; ++r)
        for (int c = 0; c < rg; ++c) A[r][c] = At[c][r];
    }
    Quad defect = 0;
    for (std::size_t p = 0; p < wcols.size(); ++p)
      for (int r = 0; r < rh; ++r) {
        Quad v = -tcols[p][r];
        for (int c = 0; c < rg; ++c) v += A[r][c] * wcols[p][c];
        defect = std::max(defect, fabsq(v));
      }
    const double rel = static_cast<double>(defect / std::max(Quad(1), tmax));
    if (rel > out.defect) {
      out.defect = rel;
      out.stratum = j + 1;
    }
    if (j + 1 <= shared)
      for (int r = 0; r < rh; ++r)
        for (int c = 0; c < rg; ++c) L[ha.stratum_offset(j + 1) + r][ga.stratum_offset(j + 1) + c] = A[r][c];
  }
  out.matrix = Eigen::MatrixXd::Zero(H->dim(), G->dim());
  for (int r = 0; r < H->dim(); ++r)
    for (int c = 0; c < G->dim(); ++c) out.matrix(r, c) = static_cast<double>(L[r][c]);
  return out;
}

}  // namespace

HomogeneousHom::HomogeneousHom(GroupPtr source, GroupPtr target, Eigen::MatrixXd matrix)
    : source_(std::move(source)), target_(std::move(target)), m_(std::move(matrix)) {
  if (!source_ || !target_) throw SpecMismatch("HomogeneousHom needs source and target groups");
  if (m_.rows() != target_->dim() || m_.cols() != source_->dim()) {
    std::ostringstream os;
    os << "hom matrix must be " << target_->dim() << "x" << source_->dim() << ", got " << m_.rows() << "x"
       << m_.cols();
    throw SpecMismatch(os.str());
  }
  const Algebra& ga = source_->algebra();
  const Algebra& ha = target_->algebra();
  for (int r = 0; r < m_.rows(); ++r)
    for (int c = 0; c < m_.cols(); ++c)
      if (m_(r, c) != 0.0 && ha.degree(r) != ga.degree(c)) {
        std::ostringstream os;
        os << "entry (" << r + 1 << "," << c + 1 << ") maps V" << ga.degree(c) << " into V" << ha.degree(r);
        throw SpecMismatch(os.str());
      }
}

HomogeneousHom HomogeneousHom::identity(GroupPtr g) {
  const int n = g->dim();
  return HomogeneousHom(g, g, Eigen::MatrixXd::Identity(n, n));
}

HomogeneousHom HomogeneousHom::dilation(GroupPtr g, double lambda) {
  const int n = g->dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = std::pow(lambda, g->algebra().degree(i));
  return HomogeneousHom(g, g, m);
}

HomogeneousHom HomogeneousHom::zero(GroupPtr source, GroupPtr target) {
  const int r = target->dim(), c = source->dim();
  return HomogeneousHom(std::move(source), std::move(target), Eigen::MatrixXd::Zero(r, c));
}

HomogeneousHom HomogeneousHom::from_blocks(GroupPtr source, GroupPtr target,
                                           const std::vector<Eigen::MatrixXd>& blocks) {
  const Algebra& ga = source->algebra();
  const Algebra& ha = target->algebra();
  const int shared = std::min(source->step(), target->step());
  if (static_cast<int>(blocks.size()) > shared)
    throw SpecMismatch("more blocks than shared strata (" + std::to_string(shared) + ")");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(target->dim(), source->dim());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int j = static_cast<int>(k) + 1;
    if (blocks[k].rows() != ha.stratum_dim(j) || blocks[k].cols() != ga.stratum_dim(j))
      throw SpecMismatch("block " + std::to_string(j) + " has the wrong shape");
    m.block(ha.stratum_offset(j), ga.stratum_offset(j), ha.stratum_dim(j), ga.stratum_dim(j)) = blocks[k];
  }
  return HomogeneousHom(std::move(source), std::move(target), m);
}

HomogeneousHom HomogeneousHom::from_horizontal(GroupPtr source, GroupPtr target, const Eigen::MatrixXd& a1,
                                               double tolerance) {
  Propagation p = propagate(source, target, a1);
  if (p.defect > tolerance) {
    std::ostringstream os;
    os << "V1 block does not extend to a morphism: relative defect " << p.defect << " in stratum " << p.stratum;
    throw ExtensionError(os.str(), p.defect, p.stratum);
  }
  return HomogeneousHom(std::move(source), std::move(target), p.matrix);
}

double HomogeneousHom::extension_defect(const GroupPtr& source, const GroupPtr& target, const Eigen::MatrixXd& a1) {
  return propagate(source, target, a1).defect;
}

int HomogeneousHom::shared_step() const { return std::min(source_->step(), target_->step()); }

Eigen::MatrixXd HomogeneousHom::block(int j) const {
  const Algebra& ga = source_->algebra();
  const Algebra& ha = target_->algebra();
  if (j < 1 || j > shared_step()) return Eigen::MatrixXd();
  return m_.block(ha.stratum_offset(j), ga.stratum_offset(j), ha.stratum_dim(j), ga.stratum_dim(j));
}

double HomogeneousHom::max_block_difference(const HomogeneousHom& other) const {
  if (m_.rows() != other.m_.rows() || m_.cols() != other.m_.cols())
    throw SpecMismatch("homs have different shapes");
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

HomResidualReport validate_hom(const HomogeneousHom& L, const HomogeneousNorm& target_norm, std::size_t samples,
                               std::uint64_t seed) {
  require_same_group(*L.target(), *target_norm.group());
  const CarnotGroup& G = *L.source();
  const CarnotGroup& H = *L.target();
  Rng rng = make_rng(seed, 0);
  HomResidualReport rep;
  rep.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const QVector p = random_box_point(rng, G).cast<Quad>();
    const QVector q = random_box_point(rng, G).cast<Quad>();
    double lambda = log_uniform(rng, 0.1, 10.0);
    if (uniform(rng, 0.0, 1.0) < 0.5) lambda = -lambda;
    const QVector lpq = L.apply(G.multiply(p, q));
    const QVector lp_lq = H.multiply(L.apply(p), L.apply(q));
    const double r1 = static_cast<double>(target_norm.value(H.difference(lpq, lp_lq)));
    const Quad lq = lambda;
    const QVector a = L.apply(G.dilate(lq, p));
    const QVector b = H.dilate(lq, L.apply(p));
    const double r2 = static_cast<double>(target_norm.value(H.difference(a, b)));
    rep.morphism_residual = std::max(rep.morphism_residual, r1);
    rep.dilation_residual = std::max(rep.dilation_residual, r2);
  }
  rep.valid = rep.morphism_residual < kHomTolerance && rep.dilation_residual < kHomTolerance;
  return rep;
}

double hom_norm(const HomogeneousHom& L, const HomogeneousNorm& source_norm, const HomogeneousNorm& target_norm,
                std::size_t sphere_samples, std::uint64_t seed) {
  require_same_group(*L.source(), *source_norm.group());
  require_same_group(*L.target(), *target_norm.group());
  Rng rng = make_rng(seed, 0);
  double best = 0.0;
  for (std::size_t i = 0; i < sphere_samples; ++i) {
    const Vector v = source_norm.sample_unit_sphere(rng);
    best = std::max(best, target_norm.value(L.apply(v)));
  }
  return best;
}

}  // namespace carnot
