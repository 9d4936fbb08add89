#include "carnot/drift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace carnot {

namespace {

std::size_t nearest_sample(const Fragment& g, double t) {
  const auto& ts = g.times();
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  if (it == ts.end()) return ts.size() - 1;
  if (it == ts.begin()) return 0;
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  return (t - ts[hi - 1] <= ts[hi] - t) ? hi - 1 : hi;
}

}  // namespace

DriftReport verify_drift(const Fragment& gamma, const Vector& e, double sigma, double t0, double R,
                         const DriftOptions& opt) {
  if (!gamma.group()) throw DomainError("verify_drift needs a fragment in a group");
  if (!(R > 0.0) || !(sigma > 0.0)) throw DomainError("verify_drift needs R > 0 and sigma > 0");
  const CarnotGroup& g = *gamma.group();
  const Algebra& a = g.algebra();
  const Cone cone(e, sigma);
  const auto i0opt = gamma.index_of(t0);
  if (!i0opt) throw DomainError("t0 is not a sample time");
  const std::size_t i0 = *i0opt;
  const double floor = opt.min_mesh_factor * gamma.mesh();

  DriftReport rep;
  rep.mesh = gamma.mesh();
  for (int k = 1;; ++k) {
    const double r = R * std::pow(10.0, -static_cast<double>(k) / opt.radii_per_decade);
    if (r < floor) break;
    const double frac = density_fraction(gamma, t0, r);
    rep.min_density = std::min(rep.min_density, frac);
    if (opt.check_hypotheses && frac < 1.0 - sigma - 1e-12) {
      std::ostringstream os;
      os << "hypothesis (i): density fraction " << frac << " < 1 - sigma at r = " << r;
      throw HypothesisError("i", os.str());
    }
  }
  if (opt.check_hypotheses) {
    std::vector<Vector> p;
    std::vector<double> tt;
    for (std::size_t i = 0; i < gamma.size(); ++i)
      if (std::fabs(gamma.time(i) - t0) <= R) {
        p.push_back(a.stratum(gamma.point(i), 1));
        tt.push_back(gamma.time(i));
      }
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (!in_cone(p[j] - p[i], cone, true)) {
          std::ostringstream os;
          os << "hypothesis (ii): increment between t=" << tt[i] << " and t=" << tt[j] << " leaves the cone";
          throw HypothesisError("ii", os.str());
        }
  }

  // Prefix sums of |pi_1 increments| over domain cells.
  std::vector<double> S(gamma.size(), 0.0);
  for (std::size_t c = 0; c + 1 < gamma.size(); ++c) {
    double inc = 0.0;
    if (gamma.cell_in_domain(c))
      inc = euclidean_norm(a.stratum(gamma.point(c + 1), 1) - a.stratum(gamma.point(c), 1));
    S[c + 1] = S[c] + inc;
  }
  const double root = std::pow(sigma, 1.0 / g.step());
  std::vector<std::size_t> used;
  for (double sign : {1.0, -1.0}) {
    for (int k = 1;; ++k) {
      const double r = R * std::pow(10.0, -static_cast<double>(k) / opt.radii_per_decade);
      if (r < floor) break;
      const std::size_t j = nearest_sample(gamma, t0 + sign * r);
      const double rho = gamma.time(j) - t0;
      if (rho * sign <= 0.0 || std::fabs(rho) >= R) continue;
      if (std::find(used.begin(), used.end(), j) != used.end()) continue;
      used.push_back(j);
      const double I = j > i0 ? S[j] - S[i0] : -(S[i0] - S[j]);
      Vector step = a.horizontal((I)*e);
      const Vector predicted = g.multiply(gamma.point(i0), step);
      const double lhs = gamma.distance(gamma.point(j), predicted);
      const double bound = root * std::fabs(rho);
      rep.rows.push_back({rho, lhs, bound, lhs / bound});
      rep.max_ratio = std::max(rep.max_ratio, lhs / bound);
    }
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const DriftRow& x, const DriftRow& y) { return x.rho < y.rho; });
  return rep;
}

Fragment synthetic_drift_fragment(const HomogeneousNorm& norm, double sigma, const DriftFamilyOptions& opt) {
  const CarnotGroup& g = *norm.group();
  if (g.horizontal_dim() < 2) throw DomainError("synthetic drift fragments need at least two horizontal directions");
  if (!(sigma > 0.0) || sigma > 1.0) throw DomainError("sigma must lie in (0, 1]");
  const long K = std::lround(opt.half_length / opt.mesh);
  const long period = std::max(2L, std::lround(8.0 / sigma));
  Rng rng = make_rng(opt.seed, 0);
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double L = opt.wobble_length;
  auto angle = [&](double t) { return 2.0 * std::numbers::pi * t / L + phase; };

  std::vector<double> times;
  std::vector<Vector> pts;
  Vector cur = g.identity();
  for (long k = 0; k <= 2 * K; ++k) {
    const double t = static_cast<double>(k - K) * opt.mesh;
    if (k > 0) {
      const double tp = static_cast<double>(k - 1 - K) * opt.mesh;
      Vector inc = g.identity();
      inc[0] = opt.mesh;
      inc[1] = sigma * (L / (2.0 * std::numbers::pi)) * (std::cos(angle(tp)) - std::cos(angle(t)));
      cur = g.multiply(cur, inc);
    }
    const long off = k - K - period / 2;
    const bool removed = ((off % period) + period) % period == 0;
    if (!removed) {
      times.push_back(t);
      pts.push_back(cur);
    }
  }
  return Fragment::in_group(norm, std::move(times), std::move(pts), false);
}

WitnessResult good_point_witness(const Fragment& gamma, const std::function<Vector(const Vector&)>& phi,
                                 const CarnotGroup& phi_group, double t, const WitnessParams& p) {
  WitnessResult res;
  const auto idx = gamma.index_of(t);
  if (!idx) throw DomainError("t is not a sample time");
  const double Kv = p.K1 * p.v;
  if (!(Kv > 0.0)) throw DomainError("K1 and v must be positive");
  res.log_kappa = std::pow(static_cast<double>(p.s), 2.0 * p.M) * std::log(Kv);
  const double bound = p.radius_bound > 0.0 ? p.radius_bound : 40.0 * (p.diam + 1.0) * p.c0 * p.R;

  const double d0 = gamma.distance(gamma.point(*idx), p.y);
  if (d0 > 1e-9) {
    res.failed_clause = 1;
    res.detail = "gamma(t) is at distance " + std::to_string(d0) + " from y";
    return res;
  }

  for (int k = 0;; ++k) {
    const double r = bound * std::pow(10.0, -static_cast<double>(k) / p.radii_per_decade);
    if (r < 4.0 * gamma.mesh()) break;
    const double missing = 1.0 - density_fraction(gamma, t, r);
    if (missing > 1e-15 && std::log(missing) >= res.log_kappa) {
      std::ostringstream os;
      os << "missing share " << missing << " of (t-r, t+r) at r = " << r << " exceeds kappa = exp("
         << res.log_kappa << ")";
      res.failed_clause = 2;
      res.detail = os.str();
      return res;
    }
  }

  const Algebra& a = phi_group.algebra();
  const double kappa2 = std::exp(2.0 * res.log_kappa);
  const Cone cone(p.e, std::sqrt(kappa2));
  std::vector<std::size_t> win;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (std::fabs(gamma.time(i) - t) <= bound) win.push_back(i);
  std::vector<Vector> img;
  for (auto i : win) img.push_back(a.stratum(phi(gamma.point(i)), 1));
  for (std::size_t x = 0; x < win.size(); ++x)
    for (std::size_t y = x + 1; y < win.size(); ++y) {
      const Vector inc = img[y] - img[x];
      const double len = euclidean_norm(inc);
      const bool in = len > 0.0 && dot(inc, cone.axis) >= (1.0 - kappa2) * len;
      const double d = gamma.distance(gamma.point(win[x]), gamma.point(win[y]));
      if (!in || !(len > p.v * d)) {
        std::ostringstream os;
        os << (in ? "speed" : "cone") << " condition fails between t=" << gamma.time(win[x])
           << " and t=" << gamma.time(win[y]);
        res.failed_clause = 3;
        res.detail = os.str();
        return res;
      }
    }
  res.pass = true;
  return res;
}

}  // namespace carnot
