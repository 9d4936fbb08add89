#include "carnot/suites.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "carnot/catalog.hpp"
#include "carnot/cones.hpp"
#include "carnot/decomposition.hpp"
#include "carnot/density.hpp"
#include "carnot/drift.hpp"
#include "carnot/hom.hpp"
#include "carnot/ledger.hpp"
#include "carnot/pansu.hpp"
#include "carnot/parallel.hpp"
#include "carnot/svg.hpp"
#include "carnot/tiling.hpp"

namespace carnot {

using nlohmann::json;

bool SuiteResult::passed() const { return first_failure() == nullptr; }

const SuiteCheck* SuiteResult::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

void SuiteResult::check(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

namespace {

std::string num(double x) { return format_number(x); }

struct SuiteDef {
  SuiteInfo info;
  SuiteResult (*run)(const SuiteConfig&);
};

// Parameter lookup restricted to the names a suite declares.
class Params {
 public:
  Params(const SuiteConfig& cfg, const std::vector<std::string>& allowed) : values_(cfg.params) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : values_)
      if (!ok.count(k)) throw UsageError("suite '" + cfg.suite + "' has no parameter '" + k + "'");
  }

  bool has(const std::string& k) const { return values_.count(k) > 0; }

  double number(const std::string& k, double fallback) const {
    auto it = values_.find(k);
    if (it == values_.end()) return fallback;
    return parse(k, it->second);
  }

  std::vector<double> list(const std::string& k, std::vector<double> fallback) const {
    auto it = values_.find(k);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse(k, item));
    if (out.empty()) throw UsageError("parameter '" + k + "' is empty");
    return out;
  }

 private:
  static double parse(const std::string& k, const std::string& v) {
    double x = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || p != e || !std::isfinite(x))
      throw UsageError("parameter '" + k + "' is not a number: '" + v + "'");
    return x;
  }

  std::map<std::string, std::string> values_;
};

struct Resolved {
  std::string name;
  GroupPtr group;
  HomogeneousNorm norm;
};

Resolved resolve_group(const SuiteConfig& cfg, const std::string& fallback) {
  try {
    CatalogEntry entry;
    if (cfg.spec_path) {
      entry = load_group_file(*cfg.spec_path);
    } else {
      entry = catalog_entry(cfg.group.empty() ? fallback : cfg.group);
    }
    GroupPtr g = CarnotGroup::create(entry.spec);
    return {entry.name, g, catalog_norm(entry, g)};
  } catch (const UnknownName& e) {
    throw UsageError(e.what());
  }
}

TileEntry resolve_tile(const Resolved& r) {
  try {
    return catalog_tile(r.name, r.group);
  } catch (const UnknownName& e) {
    throw UsageError(e.what());
  }
}

std::size_t samples_or(const SuiteConfig& cfg, std::size_t fallback) { return cfg.samples.value_or(fallback); }

GroupPtr euclidean(int n) {
  StratificationSpec spec;
  spec.name = "euclidean" + std::to_string(n);
  spec.strata = {n};
  return CarnotGroup::create(spec);
}

bool is_heisenberg1(const CarnotGroup& g) {
  StratificationSpec h{"heisenberg1", {2, 1}, {{1, 2, 3, 1.0}}};
  return same_structure(g.spec(), h);
}

SuiteResult start(const SuiteConfig& cfg, const Resolved& r) {
  SuiteResult out;
  out.suite = cfg.suite;
  out.group = r.name;
  out.seed = cfg.seed;
  return out;
}

// ---------------------------------------------------------------- group-axioms

struct AxiomStats {
  double assoc_quad = 0.0;
  double assoc_double = 0.0;
  std::size_t inverse_fail = 0;
  std::size_t identity_fail = 0;
  std::size_t q1_fail = 0;
  std::size_t triangular_fail = 0;
  double homogeneity = 0.0;
  double antisymmetry = 0.0;
  std::vector<std::size_t> hist_quad = std::vector<std::size_t>(41, 0);
  std::vector<std::size_t> hist_double = std::vector<std::size_t>(41, 0);
};

// Bin k counts defects in [10^{-k-1}, 10^{-k}); bin 40 holds smaller ones.
std::size_t defect_bin(double d) {
  if (d <= 0.0) return 40;
  const int k = static_cast<int>(std::floor(-std::log10(d)));
  return static_cast<std::size_t>(std::clamp(k, 0, 40));
}

SuiteResult run_group_axioms(const SuiteConfig& cfg) {
  Params prm(cfg, {"half", "tolerance", "q_tolerance"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const CarnotGroup& G = *r.group;
  const HomogeneousNorm& norm = r.norm;
  const std::size_t n = samples_or(cfg, 10000);
  const double half = prm.number("half", 1.0);
  const double tol = prm.number("tolerance", 1e-9);
  const double qtol = prm.number("q_tolerance", 1e-10);
  const int s = G.step();

  AxiomStats st = parallel_reduce(
      n, 500, AxiomStats{},
      [&](std::size_t chunk, std::size_t b, std::size_t e) {
        AxiomStats a;
        Rng rng = make_rng(cfg.seed, chunk);
        for (std::size_t i = b; i < e; ++i) {
          const Vector p = random_box_point(rng, G, half);
          const Vector q = random_box_point(rng, G, half);
          const Vector w = random_box_point(rng, G, half);

          const QVector pq = p.cast<Quad>(), qq = q.cast<Quad>(), wq = w.cast<Quad>();
          const QVector left = G.multiply(G.multiply(pq, qq), wq);
          const QVector right = G.multiply(pq, G.multiply(qq, wq));
          const double dq = static_cast<double>(norm.value(G.difference(left, right)));
          const Vector ld = G.multiply(G.multiply(p, q), w);
          const Vector rd = G.multiply(p, G.multiply(q, w));
          const double dd = norm.value(G.difference(ld, rd));
          a.assoc_quad = std::max(a.assoc_quad, dq);
          a.assoc_double = std::max(a.assoc_double, dd);
          ++a.hist_quad[defect_bin(dq)];
          ++a.hist_double[defect_bin(dd)];

          if (!(G.multiply(p, G.inverse(p)) == G.identity()) || !(G.multiply(G.inverse(p), p) == G.identity()))
            ++a.inverse_fail;
          if (!(G.multiply(p, G.identity()) == p) || !(G.multiply(G.identity(), p) == p)) ++a.identity_fail;

          const Vector Q = G.correction(p, q);
          for (int k = 0; k < G.algebra().stratum_dim(1); ++k)
            if (Q[static_cast<std::size_t>(k)] != 0.0) {
              ++a.q1_fail;
              break;
            }
          for (int j = 2; j <= s; ++j) {
            Vector p2 = p, q2 = q;
            for (int k = G.algebra().stratum_offset(j); k < G.algebra().stratum_offset(j) + G.algebra().stratum_dim(j);
                 ++k) {
              p2[static_cast<std::size_t>(k)] += uniform(rng, -1.0, 1.0);
              q2[static_cast<std::size_t>(k)] += uniform(rng, -1.0, 1.0);
            }
            const Vector Q2 = G.correction(p2, q2);
            const Vector prod = G.multiply(p, q), prod2 = G.multiply(p2, q2);
            for (int k = 0; k < G.algebra().stratum_offset(j); ++k) {
              const auto kk = static_cast<std::size_t>(k);
              if (Q2[kk] != Q[kk] || prod2[kk] != prod[kk]) {
                ++a.triangular_fail;
                break;
              }
            }
          }

          const double lambda = uniform(rng, 0.25, 4.0);
          const Vector Ql = G.correction(G.dilate(lambda, p), G.dilate(lambda, q));
          for (std::size_t k = 0; k < Q.size(); ++k) {
            const double want = std::pow(lambda, G.algebra().degree(static_cast<int>(k))) * Q[k];
            a.homogeneity = std::max(a.homogeneity, std::fabs(Ql[k] - want));
          }
          const Vector Qm = G.correction(G.inverse(q), G.inverse(p));
          for (std::size_t k = 0; k < Q.size(); ++k) a.antisymmetry = std::max(a.antisymmetry, std::fabs(Q[k] + Qm[k]));
        }
        return a;
      },
      [](AxiomStats acc, AxiomStats a) {
        acc.assoc_quad = std::max(acc.assoc_quad, a.assoc_quad);
        acc.assoc_double = std::max(acc.assoc_double, a.assoc_double);
        acc.inverse_fail += a.inverse_fail;
        acc.identity_fail += a.identity_fail;
        acc.q1_fail += a.q1_fail;
        acc.triangular_fail += a.triangular_fail;
        acc.homogeneity = std::max(acc.homogeneity, a.homogeneity);
        acc.antisymmetry = std::max(acc.antisymmetry, a.antisymmetry);
        for (std::size_t k = 0; k < acc.hist_quad.size(); ++k) {
          acc.hist_quad[k] += a.hist_quad[k];
          acc.hist_double[k] += a.hist_double[k];
        }
        return acc;
      });

  out.check("associativity", st.assoc_quad < tol,
            "max defect " + num(st.assoc_quad) + " (quad), " + num(st.assoc_double) + " (double) over " +
                std::to_string(n) + " triples");
  out.check("inverse_exact", st.inverse_fail == 0, std::to_string(st.inverse_fail) + " inexact inverses");
  out.check("identity_exact", st.identity_fail == 0, std::to_string(st.identity_fail) + " inexact identities");
  out.check("product_triangular", st.triangular_fail == 0,
            std::to_string(st.triangular_fail) + " pairs where a higher-stratum change moved a lower stratum");
  out.check("Q_horizontal_zero", st.q1_fail == 0, std::to_string(st.q1_fail) + " pairs with Q_1 != 0");
  out.check("Q_homogeneity", st.homogeneity < qtol, "max |Q(dp,dq) - d Q(p,q)| = " + num(st.homogeneity));
  out.check("Q_antisymmetry", st.antisymmetry < qtol, "max |Q(p,q) + Q(-q,-p)| = " + num(st.antisymmetry));

  Table t{"associativity", {"log10_upper", "count_quad", "count_double"}, {}};
  for (std::size_t k = 0; k < st.hist_quad.size(); ++k)
    if (st.hist_quad[k] || st.hist_double[k])
      t.add({-static_cast<double>(k), static_cast<double>(st.hist_quad[k]), static_cast<double>(st.hist_double[k])});
  out.tables.push_back(t);

  out.summary = {{"triples", n},
                 {"dim", G.dim()},
                 {"step", s},
                 {"Q", G.homogeneous_dimension()},
                 {"associativity_quad", number_json(st.assoc_quad)},
                 {"associativity_double", number_json(st.assoc_double)},
                 {"Q_homogeneity", number_json(st.homogeneity)},
                 {"Q_antisymmetry", number_json(st.antisymmetry)}};
  return out;
}

// ------------------------------------------------------------ norm-calibration

SuiteResult run_norm_calibration(const SuiteConfig& cfg) {
  Params prm(cfg, {"search_samples", "tolerance"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const std::size_t n = samples_or(cfg, 1000000);
  CalibrationOptions opt;
  opt.seed = cfg.seed;
  opt.search_samples = static_cast<std::size_t>(prm.number("search_samples", 20000));
  opt.tolerance = prm.number("tolerance", 1e-12);

  std::optional<HomogeneousNorm> norm;
  try {
    norm = calibrate_box_norm(r.group, n, opt);
  } catch (const CalibrationError& e) {
    out.check("certificate", false, e.what());
    out.summary["certificate"] = certificate_json(e.certificate);
    return out;
  }
  const CalibrationCertificate& cert = *norm->certificate();
  out.check("certificate", cert.passed,
            std::to_string(cert.samples) + " pairs, max ratio " + num(cert.max_ratio) + " after " +
                std::to_string(cert.rounds) + " rounds");

  const CarnotGroup& G = *r.group;
  Rng rng = make_rng(cfg.seed, 99);
  std::size_t hom_fail = 0, sym_fail = 0;
  double nondyadic = 0.0;
  Table t{"homogeneity", {"log2_lambda", "max_rel_error"}, {}};
  std::vector<double> worst(17, 0.0);
  for (int i = 0; i < 2000; ++i) {
    const Vector g = random_box_point(rng, G, 2.0);
    const double ng = norm->value(g);
    for (int k = -8; k <= 8; ++k) {
      const double lam = std::ldexp(1.0, k);
      const double nl = norm->value(G.dilate(lam, g));
      if (nl != lam * ng) ++hom_fail;
      worst[static_cast<std::size_t>(k + 8)] = std::max(worst[static_cast<std::size_t>(k + 8)],
                                                        ng > 0 ? std::fabs(nl - lam * ng) / (lam * ng) : 0.0);
    }
    const double lam = uniform(rng, 0.1, 10.0);
    if (ng > 0) nondyadic = std::max(nondyadic, std::fabs(norm->value(G.dilate(lam, g)) - lam * ng) / (lam * ng));
    if (norm->value(G.inverse(g)) != ng) ++sym_fail;
  }
  for (int k = -8; k <= 8; ++k) t.add({static_cast<double>(k), worst[static_cast<std::size_t>(k + 8)]});
  out.tables.push_back(t);
  out.check("homogeneity_exact", hom_fail == 0,
            std::to_string(hom_fail) + " inexact dyadic dilations; non-dyadic relative error " + num(nondyadic));
  out.check("symmetry_exact", sym_fail == 0, std::to_string(sym_fail) + " points with ||g^-1|| != ||g||");

  json eps = json::array();
  for (double e : norm->epsilons()) eps.push_back(number_json(e));
  out.summary = {{"eps", eps},
                 {"certificate", certificate_json(cert)},
                 {"nondyadic_homogeneity_rel", number_json(nondyadic)}};
  return out;
}

// --------------------------------------------------------------- pansu-estimate

// Entries on the grid Z/16, so the higher blocks are exact products.
HomogeneousHom random_hom(const GroupPtr& G, const GroupPtr& H, Rng& rng) {
  const int n1 = G->horizontal_dim(), m1 = H->horizontal_dim();
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd a1(m1, n1);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < n1; ++j) a1(i, j) = std::round(16.0 * standard_normal(rng)) / 16.0;
    try {
      return HomogeneousHom::from_horizontal(G, H, a1);
    } catch (const ExtensionError&) {
    }
  }
  // A multiple of the identity always extends (a dilation, possibly composed
  // with -I).
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(m1, n1);
  const double lam = std::round(16.0 * uniform(rng, 0.5, 2.0)) / 16.0 * (uniform(rng, 0, 1) < 0.5 ? -1 : 1);
  for (int i = 0; i < std::min(m1, n1); ++i) a1(i, i) = lam;
  return HomogeneousHom::from_horizontal(G, H, a1);
}

SuiteResult run_pansu_estimate(const SuiteConfig& cfg) {
  Params prm(cfg, {"homs", "block_tolerance", "residual_tolerance", "slope_lo", "slope_hi", "finest_log2"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const GroupPtr& G = r.group;
  const int homs = static_cast<int>(cfg.samples.value_or(static_cast<std::size_t>(prm.number("homs", 20))));
  const double block_tol = prm.number("block_tolerance", 1e-6);
  const double res_tol = prm.number("residual_tolerance", 1e-8);
  const int finest = static_cast<int>(prm.number("finest_log2", 12));
  const int n1 = G->horizontal_dim();

  std::vector<double> scales;
  for (int k = 0; k <= finest; ++k) scales.push_back(std::ldexp(1.0, -k));

  GroupPtr Rn = euclidean(n1);
  const HomogeneousNorm rn_norm = HomogeneousNorm::unit(Rn);
  struct Target {
    std::string label;
    GroupPtr group;
    const HomogeneousNorm* norm;
  };
  const std::vector<Target> targets{{r.name, G, &r.norm}, {Rn->name(), Rn, &rn_norm}};

  Table t{"pansu_homs", {"target", "index", "validation_residual", "block_error", "max_residual"}, {}};
  std::vector<SvgSeries> series;
  json per_target = json::array();
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const Target& tg = targets[ti];
    Rng rng = make_rng(cfg.seed, 10 + ti);
    double worst_block = 0.0, worst_res = 0.0, worst_val = 0.0;
    int invalid = 0, failed = 0;
    for (int i = 0; i < homs; ++i) {
      const HomogeneousHom L = random_hom(G, tg.group, rng);
      const HomResidualReport val = validate_hom(L, *tg.norm, 2000, cfg.seed + static_cast<std::uint64_t>(i));
      if (!val.valid) ++invalid;
      worst_val = std::max({worst_val, val.morphism_residual, val.dilation_residual});
      const Vector g = random_box_point(rng, *tg.group, 1.0);
      const Vector x0 = random_box_point(rng, *G, 1.0);
      std::vector<Vector> dirs;
      for (int k = 0; k < n1 + 2; ++k) dirs.push_back(random_direction(rng, n1));
      const MapSampler f = MapSampler::translated_hom(L, g);
      try {
        const PansuEstimate est = estimate_pansu_derivative(f, x0, scales, dirs, r.norm, *tg.norm);
        const double be = est.hom.max_block_difference(L);
        const double mr = est.curve.max_residual();
        worst_block = std::max(worst_block, be);
        worst_res = std::max(worst_res, mr);
        t.add({static_cast<double>(ti), static_cast<double>(i), std::max(val.morphism_residual, val.dilation_residual),
               be, mr});
        if (i < 3) {
          SvgSeries sv{tg.label + " hom " + std::to_string(i), {}, {}, palette(static_cast<int>(ti * 3 + i) + 1), true};
          for (const auto& [sc, res] : est.curve.points()) {
            sv.x.push_back(sc);
            sv.y.push_back(res);
          }
          series.push_back(sv);
        }
      } catch (const std::exception&) {
        ++failed;
      }
    }
    out.check("homs_valid_" + tg.label, invalid == 0,
              std::to_string(invalid) + " of " + std::to_string(homs) + " failed validation, max residual " +
                  num(worst_val));
    out.check("blocks_" + tg.label, failed == 0 && worst_block < block_tol,
              "max block error " + num(worst_block) + (failed ? ", " + std::to_string(failed) + " estimates threw" : ""));
    out.check("residuals_" + tg.label, failed == 0 && worst_res < res_tol, "max residual " + num(worst_res));
    per_target.push_back({{"target", tg.label},
                          {"max_block_error", number_json(worst_block)},
                          {"max_residual", number_json(worst_res)},
                          {"max_validation_residual", number_json(worst_val)}});
  }

  // A smooth map that is not a morphism: sin on the first coordinate.
  MapSampler smooth{G, G,
                    [](const Vector& x) {
                      Vector y = x;
                      y[0] = std::sin(x[0]);
                      return y;
                    },
                    std::nullopt};
  Rng rng = make_rng(cfg.seed, 50);
  std::vector<Vector> dirs;
  for (int k = 0; k < n1 + 2; ++k) dirs.push_back(random_direction(rng, n1));
  PansuOptions sopt;
  sopt.extension_tolerance = 1e-6;
  const PansuEstimate est = estimate_pansu_derivative(smooth, G->identity(), scales, dirs, r.norm, r.norm, sopt);
  const double slope = est.slope.value_or(std::numeric_limits<double>::quiet_NaN());
  if (is_heisenberg1(*G)) {
    const double lo = prm.number("slope_lo", 0.9), hi = prm.number("slope_hi", 1.5);
    out.check("smooth_slope", std::isfinite(slope) && slope >= lo && slope <= hi,
              "finest-decade slope " + num(slope) + ", want [" + num(lo) + ", " + num(hi) + "]");
  }
  Table curve{"smooth_residuals", {"scale", "residual"}, {}};
  SvgSeries sv{"sin map", {}, {}, palette(0), true, 2.0};
  for (const auto& [sc, res] : est.curve.points()) {
    curve.add({sc, res});
    sv.x.push_back(sc);
    sv.y.push_back(res);
  }
  series.insert(series.begin(), sv);
  out.tables.push_back(t);
  out.tables.push_back(curve);
  out.svgs.emplace_back("pansu_residuals.svg",
                        render_svg(series, "Pansu residual curves", "scale t", "residual", true, true));
  out.summary = {{"homs", homs},
                 {"targets", per_target},
                 {"smooth_slope", number_json(slope)},
                 {"smooth_fit_scale", number_json(est.fit_scale)},
                 {"smooth_extension_defect", number_json(est.extension_defect)}};
  return out;
}

// ---------------------------------------------------------- decompose-roundtrip

struct RoundTrip {
  double c0 = 0.0;
  double worst_rel_error = 0.0;
  int failures = 0;
  int wrong_length = 0;
  int restarts = 0;
};

RoundTrip round_trip(const Decomposer& dec, std::size_t n, std::uint64_t seed, double tol, double rmin, double rmax,
                     Table* table, double set_id) {
  const CarnotGroup& G = *dec.group();
  RoundTrip rt;
  Rng rng = make_rng(seed, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = log_uniform(rng, rmin, rmax);
    const Vector v = G.dilate(radius, dec.norm().sample_unit_sphere(rng));
    try {
      const DecompositionWord w = dec.decompose(v, seed + i);
      const double rel = w.reconstruction_error / std::max(1.0, w.target_norm);
      rt.worst_rel_error = std::max(rt.worst_rel_error, rel);
      if (rel > tol) ++rt.failures;
      if (static_cast<int>(w.size()) != 2 * G.dim()) ++rt.wrong_length;
      rt.c0 = std::max(rt.c0, w.bound_ratio);
      rt.restarts += w.restarts_used;
      if (table) table->add({set_id, static_cast<double>(i), w.target_norm, w.reconstruction_error, w.bound_ratio});
    } catch (const DecompositionError&) {
      ++rt.failures;
    }
  }
  return rt;
}

SuiteResult run_decompose_roundtrip(const SuiteConfig& cfg) {
  Params prm(cfg, {"tolerance", "c0_spread", "r_min", "r_max"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const std::size_t n = samples_or(cfg, 1000);
  const double tol = prm.number("tolerance", 1e-8);
  const double spread_tol = prm.number("c0_spread", 0.1);
  const double rmin = prm.number("r_min", 1e-2), rmax = prm.number("r_max", 10.0);
  const GroupPtr& G = r.group;

  AnchorOptions aopt;
  aopt.seed = cfg.seed;
  const HorizontalBasis basis = HorizontalBasis::standard(*G);
  const Decomposer dec(G, basis, r.norm, aopt);

  Table t{"roundtrip", {"seed_set", "index", "target_norm", "reconstruction_error", "bound_ratio"}, {}};
  const RoundTrip a = round_trip(dec, n, cfg.seed * 2 + 1, tol, rmin, rmax, &t, 0);
  const RoundTrip b = round_trip(dec, n, cfg.seed * 2 + 2, tol, rmin, rmax, &t, 1);

  out.check("reconstruction", a.failures + b.failures == 0,
            std::to_string(a.failures + b.failures) + " of " + std::to_string(2 * n) +
                " targets missed; worst error / max(1,||v||) = " + num(std::max(a.worst_rel_error, b.worst_rel_error)));
  out.check("word_length", a.wrong_length + b.wrong_length == 0,
            "every word has " + std::to_string(2 * G->dim()) + " letters unless counted here: " +
                std::to_string(a.wrong_length + b.wrong_length));
  const double spread = std::fabs(a.c0 - b.c0) / std::max(a.c0, b.c0);
  out.check("c0_stable", std::isfinite(a.c0) && std::isfinite(b.c0) && spread < spread_tol,
            "c0 " + num(a.c0) + " vs " + num(b.c0) + ", relative spread " + num(spread));

  json summary = {{"targets_per_seed", n},
                  {"pattern", dec.anchor().pattern},
                  {"anchor", dec.anchor().s_hat},
                  {"zeta", number_json(dec.anchor().zeta)},
                  {"condition", number_json(dec.anchor().condition)},
                  {"c0", {number_json(a.c0), number_json(b.c0)}},
                  {"worst_relative_error", number_json(std::max(a.worst_rel_error, b.worst_rel_error))},
                  {"restarts", a.restarts + b.restarts}};

  if (is_heisenberg1(*G)) {
    const Vector c = evaluate_word(*G, basis, {1, 2, 1, 2}, {1.0, 1.0, -1.0, -1.0});
    const double err = max_abs(c - Vector{0.0, 0.0, 1.0});
    out.check("commutator_identity", err <= 1e-12, "exp(X)exp(Y)exp(-X)exp(-Y) off (0,0,1) by " + num(err));
    summary["commutator"] = to_json(c);
  }

  std::vector<SvgSeries> series;
  for (int set = 0; set < 2; ++set) {
    SvgSeries sv{"seed set " + std::to_string(set), {}, {}, palette(set), false, 1.5};
    for (const auto& row : t.rows)
      if (row[0] == set) {
        sv.x.push_back(row[2]);
        sv.y.push_back(row[4]);
      }
    series.push_back(sv);
  }
  out.svgs.emplace_back("roundtrip_ratios.svg",
                        render_svg(series, "Coefficient bound |s|/||v||", "||v||", "max |s_k| / ||v||", true, false));
  out.tables.push_back(t);
  out.summary = summary;
  return out;
}

// ------------------------------------------------------------------------ drift

const DriftRow& row_near(const DriftReport& rep, double rho) {
  const DriftRow* best = &rep.rows.front();
  for (const auto& row : rep.rows)
    if (std::fabs(row.rho - rho) < std::fabs(best->rho - rho)) best = &row;
  return *best;
}

SuiteResult run_drift(const SuiteConfig& cfg) {
  Params prm(cfg, {"sigmas", "R", "rho", "spread", "mesh"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  if (r.group->step() != 2 || r.group->horizontal_dim() < 2)
    throw UsageError("suite 'drift' needs a step-2 group with at least two horizontal directions");
  SuiteResult out = start(cfg, r);
  std::vector<double> sigmas = prm.list("sigmas", {0.1, 0.05, 0.01});
  std::sort(sigmas.begin(), sigmas.end(), std::greater<>());
  const double R = prm.number("R", 0.5);
  const double rho_fixed = prm.number("rho", 0.25);
  const double spread_tol = prm.number("spread", 3.0);
  const int n1 = r.group->horizontal_dim();
  Vector e(static_cast<std::size_t>(n1));
  e[0] = 1.0;

  DriftFamilyOptions fopt;
  fopt.seed = cfg.seed;
  fopt.mesh = prm.number("mesh", 1e-3);

  Table t{"drift_ratios", {"sigma", "rho", "lhs", "bound", "ratio"}, {}};
  std::vector<SvgSeries> paths, ratios;
  std::vector<double> max_ratio, lhs_fixed, rho_used;
  std::string hypothesis_error;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double sigma = sigmas[k];
    const Fragment gamma = synthetic_drift_fragment(r.norm, sigma, fopt);
    SvgSeries path{"sigma " + num(sigma), {}, {}, palette(static_cast<int>(k)), true};
    for (const auto& p : gamma.points()) {
      path.x.push_back(p[0]);
      path.y.push_back(p[1]);
    }
    paths.push_back(path);
    try {
      const DriftReport rep = verify_drift(gamma, e, sigma, 0.0, R);
      SvgSeries rs{"sigma " + num(sigma), {}, {}, palette(static_cast<int>(k)), false, 1.5};
      for (const auto& row : rep.rows) {
        t.add({sigma, row.rho, row.lhs, row.bound, row.ratio});
        rs.x.push_back(std::fabs(row.rho));
        rs.y.push_back(row.ratio);
      }
      ratios.push_back(rs);
      max_ratio.push_back(rep.max_ratio);
      const DriftRow& near = row_near(rep, rho_fixed);
      lhs_fixed.push_back(near.lhs);
      rho_used.push_back(near.rho);
    } catch (const HypothesisError& err) {
      hypothesis_error += "sigma " + num(sigma) + ": " + err.item + " (" + err.what() + ") ";
    }
  }
  out.check("hypotheses", hypothesis_error.empty(), hypothesis_error.empty() ? "all fragments qualify" : hypothesis_error);
  if (!hypothesis_error.empty()) return out;

  const double hi = *std::max_element(max_ratio.begin(), max_ratio.end());
  const double lo = *std::min_element(max_ratio.begin(), max_ratio.end());
  out.check("ratio_bounded", lo > 0 && hi / lo < spread_tol,
            "max ratio per sigma in [" + num(lo) + ", " + num(hi) + "], spread " + num(hi / lo));
  bool mono = true;
  for (std::size_t k = 1; k < lhs_fixed.size(); ++k) mono = mono && lhs_fixed[k] < lhs_fixed[k - 1];
  std::string lhs_list;
  for (std::size_t k = 0; k < lhs_fixed.size(); ++k) lhs_list += (k ? ", " : "") + num(lhs_fixed[k]);
  out.check("lhs_monotone", mono, "lhs near rho " + num(rho_fixed) + " as sigma decreases: " + lhs_list);

  // Straight horizontal line: the drift term vanishes.
  std::vector<double> times;
  std::vector<Vector> pts;
  const int steps = static_cast<int>(std::lround(2.0 / fopt.mesh));
  for (int i = 0; i <= steps; ++i) {
    const double tt = -1.0 + 2.0 * i / steps;
    Vector p = r.group->identity();
    p[0] = tt;
    times.push_back(tt);
    pts.push_back(p);
  }
  const Fragment line = Fragment::in_group(r.norm, times, pts);
  const DriftReport lr = verify_drift(line, e, sigmas.back(), 0.0, R);
  double line_max = 0.0;
  for (const auto& row : lr.rows) line_max = std::max(line_max, row.lhs);
  out.check("straight_line", line_max < 1e-10, "max lhs " + num(line_max));

  out.tables.push_back(t);
  out.svgs.emplace_back("drift_fragments.svg",
                        render_svg(paths, "Horizontal projection of the fragments", "x1", "x2"));
  out.svgs.emplace_back("drift_ratios.svg",
                        render_svg(ratios, "Drift ratio lhs / (sigma^(1/2) rho)", "|rho|", "ratio", true, false));
  json rows = json::array();
  for (std::size_t k = 0; k < sigmas.size(); ++k)
    rows.push_back({{"sigma", number_json(sigmas[k])},
                    {"max_ratio", number_json(max_ratio[k])},
                    {"rho", number_json(rho_used[k])},
                    {"lhs", number_json(lhs_fixed[k])}});
  out.summary = {{"R", number_json(R)}, {"sigmas", rows}, {"straight_line_max_lhs", number_json(line_max)}};
  return out;
}

// ---------------------------------------------------------------- tiling-verify

int default_depth(const CarnotGroup& g) { return std::clamp(24 / g.homogeneous_dimension(), 4, 10); }

SuiteResult run_tiling_verify(const SuiteConfig& cfg) {
  Params prm(cfg, {"grid_resolution", "cloud_depth_cap", "lambda_tolerance"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const TileEntry entry = resolve_tile(r);
  TileOptions opt;
  opt.depth = cfg.depth.value_or(default_depth(*r.group));
  opt.grid_resolution = prm.number("grid_resolution", opt.grid_resolution);
  opt.cloud_depth_cap = static_cast<int>(prm.number("cloud_depth_cap", opt.cloud_depth_cap));
  opt.seed = cfg.seed;
  if (opt.depth < 4) throw UsageError("suite 'tiling-verify' needs --depth >= 4");
  const double lam_tol = prm.number("lambda_tolerance", 0.1);

  const TileReport rep = verify_tile(entry.tile, r.norm, opt);
  out.check("self_similarity", rep.self_similarity_defect == 0.0,
            "defect " + num(rep.self_similarity_defect) + " at depth " + std::to_string(rep.cloud_depth));
  const double bound = std::ldexp(1.0, 2 - opt.depth);
  out.check("overlap_small", rep.overlap_fraction < bound,
            "overlap " + num(rep.overlap_fraction) + " at depth " + std::to_string(opt.depth) + ", bound " + num(bound));

  Table t{"overlap", {"depth", "occupied_cells", "shared_cells", "fraction"}, {}};
  std::vector<double> fr;
  for (int d = std::max(1, opt.depth - 2); d <= opt.depth; ++d) {
    const OverlapCount oc = d == opt.depth ? OverlapCount{d, rep.occupied_cells, rep.shared_cells, rep.overlap_fraction}
                                           : overlap_count(entry.tile, d, opt.grid_resolution);
    t.add({static_cast<double>(d), static_cast<double>(oc.occupied_cells), static_cast<double>(oc.shared_cells),
           oc.fraction});
    fr.push_back(oc.fraction);
  }
  bool all_zero = std::all_of(fr.begin(), fr.end(), [](double f) { return f == 0.0; });
  bool decreasing = true;
  for (std::size_t k = 1; k < fr.size(); ++k) decreasing = decreasing && fr[k] < fr[k - 1];
  std::string frs;
  for (std::size_t k = 0; k < fr.size(); ++k) frs += (k ? ", " : "") + num(fr[k]);
  out.check("overlap_decreasing", all_zero || decreasing,
            "fractions over depths " + std::to_string(std::max(1, opt.depth - 2)) + ".." + std::to_string(opt.depth) +
                ": " + frs);

  if (entry.lambda) {
    const double rel = std::fabs(rep.lambda_emp - *entry.lambda) / *entry.lambda;
    out.check("lambda", rel <= lam_tol,
              "lambda_emp " + num(rep.lambda_emp) + " vs analytic " + num(*entry.lambda) + ", relative " + num(rel));
  } else {
    out.check("lambda", rep.lambda_emp > 0.0, "lambda_emp " + num(rep.lambda_emp));
  }

  // Projection of a shallow cloud, colored by first-level piece.
  const int shallow = std::min(rep.cloud_depth, std::max(1, 12 / r.group->homogeneous_dimension()));
  const PointCloud cloud = attractor(entry.tile, shallow);
  const std::size_t pieces = entry.tile.centers.size();
  const std::size_t block = cloud.size() / pieces;
  std::vector<SvgSeries> series;
  for (std::size_t j = 0; j < pieces; ++j) {
    SvgSeries sv{"piece " + std::to_string(j + 1), {}, {}, palette(static_cast<int>(j)), false, 1.5};
    for (std::size_t i = j * block; i < (j + 1) * block; ++i) {
      const Vector p = cloud.point(i);
      sv.x.push_back(p[0]);
      sv.y.push_back(cloud.dim > 1 ? p[1] : static_cast<double>(j) / pieces);
    }
    series.push_back(sv);
  }
  out.svgs.emplace_back("tile_projection.svg",
                        render_svg(series, "Tile " + r.name + ", depth " + std::to_string(shallow), "x1",
                                   cloud.dim > 1 ? "x2" : "piece"));
  out.tables.push_back(t);
  json summary = tile_report_json(rep);
  summary["provenance"] = entry.tile.provenance;
  summary["lambda_analytic"] = entry.lambda ? number_json(*entry.lambda) : json(nullptr);
  out.summary = summary;
  return out;
}

// ----------------------------------------------------------------- reachability

std::vector<HorizontalBasis> cone_bases(const CarnotGroup& G, double alpha, std::vector<Cone>* cones) {
  const int n1 = G.horizontal_dim();
  std::vector<HorizontalBasis> bases{HorizontalBasis::standard(G)};
  if (n1 == 1) {
    if (cones) cones->push_back(Cone(Vector{1.0}, alpha));
    return bases;
  }
  std::vector<Vector> tilted;
  for (int i = 0; i < n1; ++i) {
    Vector axis(static_cast<std::size_t>(n1));
    axis[static_cast<std::size_t>(i)] = 1.0;
    Cone c(axis, alpha);
    const double th = 0.5 * c.half_angle();
    Vector v(static_cast<std::size_t>(n1));
    v[static_cast<std::size_t>(i)] = std::cos(th);
    v[static_cast<std::size_t>((i + 1) % n1)] = std::sin(th);
    tilted.push_back(v);
    if (cones) cones->push_back(c);
  }
  bases.emplace_back(G, tilted);
  return bases;
}

struct ReachSetup {
  ReachabilityParams params;
  bool xi_derived = false;
  bool c0_derived = false;
  double calibration_q01 = 0.0;
  double calibration_max_ratio = 0.0;
};

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
  return v[k];
}

// xi and c0 come from a calibration run on a separate seed unless given.
ReachSetup reach_setup(const TileSpec& tile, const Decomposer& dec, const std::vector<HorizontalBasis>& bases,
                       const Params& prm, std::uint64_t seed) {
  ReachSetup rs;
  rs.params.rho = prm.number("rho", 0.05);
  rs.params.samples_per_center = static_cast<int>(prm.number("samples_per_center", 32));
  rs.params.seed = seed;
  ReachabilityParams cal = rs.params;
  cal.seed = seed + 7919;
  cal.xi = 0.0;
  cal.c0 = std::numeric_limits<double>::infinity();
  const ReachabilityReport calib = reachability_check(tile, dec, bases, cal);
  rs.calibration_q01 = quantile(calib.trial_min_nonzero, 0.01);
  rs.calibration_max_ratio = calib.max_ratio;
  rs.xi_derived = !prm.has("xi");
  rs.c0_derived = !prm.has("c0");
  rs.params.xi = prm.number("xi", std::min(0.1, 0.5 * rs.calibration_q01));
  rs.params.c0 = prm.number("c0", 1.25 * rs.calibration_max_ratio);
  return rs;
}

const std::vector<std::string> kReachParams{"xi", "c0", "rho", "samples_per_center", "min_pass", "alpha"};

SuiteResult run_reachability(const SuiteConfig& cfg) {
  Params prm(cfg, kReachParams);
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const TileEntry entry = resolve_tile(r);
  const double alpha = prm.number("alpha", 0.1);
  const double min_pass = prm.number("min_pass", 0.95);
  std::vector<Cone> cones;
  const std::vector<HorizontalBasis> bases = cone_bases(*r.group, alpha, &cones);
  AnchorOptions aopt;
  aopt.seed = cfg.seed;
  const Decomposer dec(r.group, bases.front(), r.norm, aopt);
  const ReachSetup rs = reach_setup(entry.tile, dec, bases, prm, cfg.seed);
  const ReachabilityReport rep = reachability_check(entry.tile, dec, bases, rs.params);

  if (cones.size() > 1) {
    const XiResult sep = cones_xi_separated(cones, rs.params.xi);
    out.check("cones_separated", sep.separated,
              "cone separation ratio " + num(sep.min_ratio) + " against xi " + num(rs.params.xi));
  }
  out.check("pass_fraction", rep.pass_fraction >= min_pass,
            std::to_string(rep.passed) + " of " + std::to_string(rep.trials) + " trials pass at xi " +
                num(rs.params.xi) + ", c0 " + num(rs.params.c0) + " (need fraction " + num(min_pass) + ")");

  Table t{"reachability", {"center", "trials", "passed", "decomposition_failures", "min_nonzero", "max_ratio"}, {}};
  json centers = json::array();
  for (const auto& c : rep.centers) {
    t.add({static_cast<double>(c.center), static_cast<double>(c.trials), static_cast<double>(c.passed),
           static_cast<double>(c.decomposition_failures), c.min_nonzero, c.max_ratio});
    centers.push_back({{"center", c.center},
                       {"point", to_json(entry.tile.centers[static_cast<std::size_t>(c.center)])},
                       {"trials", c.trials},
                       {"passed", c.passed},
                       {"min_nonzero", number_json(c.min_nonzero)},
                       {"max_ratio", number_json(c.max_ratio)}});
  }
  out.tables.push_back(t);
  out.summary = {{"xi", number_json(rs.params.xi)},
                 {"xi_derived", rs.xi_derived},
                 {"c0", number_json(rs.params.c0)},
                 {"c0_derived", rs.c0_derived},
                 {"rho", number_json(rs.params.rho)},
                 {"bases", bases.size()},
                 {"calibration_q01", number_json(rs.calibration_q01)},
                 {"calibration_max_ratio", number_json(rs.calibration_max_ratio)},
                 {"pass_fraction", number_json(rep.pass_fraction)},
                 {"min_nonzero", number_json(rep.min_nonzero)},
                 {"max_ratio", number_json(rep.max_ratio)},
                 {"centers", centers}};
  return out;
}

// ------------------------------------------------------------------------ ledger

SuiteResult run_ledger(const SuiteConfig& cfg) {
  std::vector<std::string> allowed = kReachParams;
  for (const char* k : {"lip_phi", "c_surj", "C1", "C", "conjugation_samples", "rounds"}) allowed.emplace_back(k);
  Params prm(cfg, allowed);
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const CarnotGroup& G = *r.group;
  const TileEntry entry = resolve_tile(r);

  TileOptions topt;
  topt.depth = cfg.depth.value_or(std::min(default_depth(G), 5));
  topt.seed = cfg.seed;
  const TileReport tr = verify_tile(entry.tile, r.norm, topt);

  std::vector<Cone> cones;
  const std::vector<HorizontalBasis> bases = cone_bases(G, prm.number("alpha", 0.1), &cones);
  AnchorOptions aopt;
  aopt.seed = cfg.seed;
  const Decomposer dec(r.group, bases.front(), r.norm, aopt);
  const ReachSetup rs = reach_setup(entry.tile, dec, bases, prm, cfg.seed);

  LedgerInputs in;
  in.diam = tr.diam_emp;
  in.lambda = std::min(tr.lambda_emp, 0.99 * tr.diam_emp / 4.0);
  in.c0 = rs.params.c0;
  in.xi = rs.params.xi;
  in.M = 2 * G.dim();
  in.s = G.step();
  in.lip_phi = prm.number("lip_phi", 1.0);
  in.c_surj = prm.number("c_surj", 0.1);
  const double radius = std::max(4.0 * in.c0 * (in.diam + 1.0), 2.0);
  in.C = prm.has("C") ? prm.number("C", 1.0)
                      : conjugation_constant(r.norm, radius,
                                             static_cast<std::size_t>(prm.number("conjugation_samples", 20000)),
                                             cfg.seed);
  double drift_ratio = std::numeric_limits<double>::quiet_NaN();
  if (prm.has("C1")) {
    in.C1 = prm.number("C1", 1.0);
  } else if (G.step() == 2 && G.horizontal_dim() >= 2) {
    DriftFamilyOptions fopt;
    fopt.seed = cfg.seed;
    Vector e(static_cast<std::size_t>(G.horizontal_dim()));
    e[0] = 1.0;
    drift_ratio = verify_drift(synthetic_drift_fragment(r.norm, 0.05, fopt), e, 0.05, 0.0, 0.5).max_ratio;
    in.C1 = drift_ratio;
  } else {
    in.C1 = 1.0;
  }

  const ConstantLedger initial = constant_ledger(in);
  const ConstantLedger shrunk = shrink_ledger(in, static_cast<int>(prm.number("rounds", 8)));
  for (const auto& c : shrunk.checks)
    out.check(c.name, c.pass,
              "log lhs " + num(c.log_lhs) + " vs log rhs " + num(c.log_rhs) +
                  (c.shrink.empty() ? "" : ", shrink " + c.shrink));

  Table t{"ledger_checks", {"shrunk", "check", "log_lhs", "log_rhs", "pass"}, {}};
  for (int pass = 0; pass < 2; ++pass) {
    const ConstantLedger& L = pass ? shrunk : initial;
    for (std::size_t k = 0; k < L.checks.size(); ++k)
      t.add({static_cast<double>(pass), static_cast<double>(k), L.checks[k].log_lhs, L.checks[k].log_rhs,
             L.checks[k].pass ? 1.0 : 0.0});
  }
  out.tables.push_back(t);
  out.summary = {{"tile", tile_report_json(tr)},
                 {"lambda_clamped", tr.lambda_emp > in.lambda},
                 {"conjugation_radius", number_json(radius)},
                 {"drift_max_ratio", number_json(drift_ratio)},
                 {"reachability_q01", number_json(rs.calibration_q01)},
                 {"initial", ledger_json(initial)},
                 {"shrunk", ledger_json(shrunk)}};
  return out;
}

// ---------------------------------------------------------------- density-david

json estimate_json(const DensityEstimate& e) {
  json rows = json::array();
  for (const auto& d : e.decades)
    rows.push_back({{"r_lo", number_json(d.r_lo)},
                    {"r_hi", number_json(d.r_hi)},
                    {"radii", d.radii},
                    {"theta_lower", number_json(d.theta_lower)},
                    {"theta_upper", number_json(d.theta_upper)}});
  return {{"theta_lower", number_json(e.theta_lower)},
          {"theta_upper", number_json(e.theta_upper)},
          {"floor", number_json(e.floor)},
          {"top_decade_ratio", number_json(e.top_decade_ratio)},
          {"decades", rows}};
}

SuiteResult run_density_david(const SuiteConfig& cfg) {
  Params prm(cfg, {"axis_points", "radius", "eps", "evaluation_points", "ratio_max", "david_min", "david_axis_max",
                   "divergence_min"});
  Resolved r = resolve_group(cfg, "heisenberg1");
  SuiteResult out = start(cfg, r);
  const CarnotGroup& G = *r.group;
  const std::size_t n = samples_or(cfg, 200000);
  const auto n_axis = static_cast<std::size_t>(prm.number("axis_points", 100000));
  const double radius = prm.number("radius", 1.0);
  const double Q = G.homogeneous_dimension();
  DavidOptions dopt;
  dopt.eps = prm.number("eps", 0.5);
  dopt.evaluation_points = static_cast<std::size_t>(prm.number("evaluation_points", 500));
  dopt.seed = cfg.seed;
  const auto radii = geometric_radii(1e-3, radius, 31);
  const MapSampler chart = identity_map(r.group);

  const WeightedCloud uni(r.norm, uniform_ball_cloud(r.norm, radius, n, cfg.seed), 0.25 * radius);
  const double fu = uni.resolution_floor(2000, cfg.seed);
  const DensityEstimate eu = density_estimates(uni, G.identity(), radii, Q, fu);
  const DavidReport du = david_fraction(uni, chart, dopt);

  const WeightedCloud axis(r.norm, vertical_axis_cloud(G, radius, n_axis, cfg.seed + 1), 0.25 * radius);
  const double fa = axis.resolution_floor(2000, cfg.seed);
  const DensityEstimate ea = density_estimates(axis, G.identity(), radii, Q, fa);
  const DavidReport da = david_fraction(axis, chart, dopt);

  const double ratio = eu.theta_upper / eu.theta_lower;
  out.check("uniform_density_ratio", ratio < prm.number("ratio_max", 2.0),
            "theta_upper / theta_lower = " + num(ratio) + " at Q = " + num(Q));
  out.check("uniform_david", du.fraction > prm.number("david_min", 0.9),
            "david fraction " + num(du.fraction) + " over " + std::to_string(du.evaluated) + " points");
  out.check("axis_david", da.fraction < prm.number("david_axis_max", 0.05),
            "david fraction " + num(da.fraction) + " over " + std::to_string(da.evaluated) + " points");
  out.check("axis_density_diverges", ea.top_decade_ratio > prm.number("divergence_min", 5.0),
            "theta_upper ratio across the top two decades " + num(ea.top_decade_ratio));

  Table t{"density_decades", {"cloud", "r_lo", "r_hi", "theta_lower", "theta_upper"}, {}};
  std::vector<SvgSeries> series;
  int ci = 0;
  for (const DensityEstimate* e : {&eu, &ea}) {
    SvgSeries sv{ci == 0 ? "uniform ball" : "vertical axis", {}, {}, palette(ci), true, 2.0};
    for (const auto& d : e->decades) {
      t.add({static_cast<double>(ci), d.r_lo, d.r_hi, d.theta_lower, d.theta_upper});
      sv.x.push_back(d.r_hi);
      sv.y.push_back(d.theta_upper);
    }
    series.push_back(sv);
    ++ci;
  }
  Table cov{"david_coverage", {"cloud", "point", "best_coverage"}, {}};
  for (std::size_t i = 0; i < du.best_coverage.size(); ++i)
    cov.add({0.0, static_cast<double>(du.evaluated_points[i]), du.best_coverage[i]});
  for (std::size_t i = 0; i < da.best_coverage.size(); ++i)
    cov.add({1.0, static_cast<double>(da.evaluated_points[i]), da.best_coverage[i]});
  out.tables.push_back(t);
  out.tables.push_back(cov);
  out.svgs.emplace_back("density_decades.svg", render_svg(series, "Upper density by decade (Q = " + num(Q) + ")",
                                                          "decade upper radius", "theta_upper", true, true));
  out.summary = {{"Q", number_json(Q)},
                 {"uniform", {{"points", n}, {"estimate", estimate_json(eu)}, {"david_fraction", number_json(du.fraction)}}},
                 {"axis",
                  {{"points", n_axis}, {"estimate", estimate_json(ea)}, {"david_fraction", number_json(da.fraction)}}},
                 {"reference_cells", du.reference_cells},
                 {"eps", number_json(dopt.eps)}};
  return out;
}

const std::vector<SuiteDef>& defs() {
  static const std::vector<SuiteDef> d{
      {{"group-axioms", "heisenberg1", "associativity, inverse, identity and the BCH correction Q",
        {"half", "tolerance", "q_tolerance"}},
       run_group_axioms},
      {{"norm-calibration", "heisenberg1", "box-norm calibration certificate, homogeneity, symmetry",
        {"search_samples", "tolerance"}},
       run_norm_calibration},
      {{"pansu-estimate", "heisenberg1", "Pansu derivative recovery for translated morphisms and a smooth map",
        {"homs", "block_tolerance", "residual_tolerance", "slope_lo", "slope_hi", "finest_log2"}},
       run_pansu_estimate},
      {{"decompose-roundtrip", "heisenberg1", "horizontal word decomposition round trip and c0 stability",
        {"tolerance", "c0_spread", "r_min", "r_max"}},
       run_decompose_roundtrip},
      {{"drift", "heisenberg1", "drift estimate on the synthetic fragment family", {"sigmas", "R", "rho", "spread", "mesh"}},
       run_drift},
      {{"tiling-verify", "heisenberg1", "self-similarity, overlap and interior radius of the shipped tile",
        {"grid_resolution", "cloud_depth_cap", "lambda_tolerance"}},
       run_tiling_verify},
      {{"reachability", "heisenberg1", "tile centers reachable by separated horizontal words", kReachParams},
       run_reachability},
      {{"ledger", "heisenberg1", "constant chain with automated shrink",
        {"xi", "c0", "rho", "samples_per_center", "min_pass", "alpha", "lip_phi", "c_surj", "C1", "C",
         "conjugation_samples", "rounds"}},
       run_ledger},
      {{"density-david", "heisenberg1", "density ratios and David fraction on uniform and axis clouds",
        {"axis_points", "radius", "eps", "evaluation_points", "ratio_max", "david_min", "david_axis_max",
         "divergence_min"}},
       run_density_david},
  };
  return d;
}

}  // namespace

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const auto& d : defs()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

SuiteResult run_suite(const SuiteConfig& config) {
  for (const auto& d : defs())
    if (d.info.name == config.suite) return d.run(config);
  std::string names;
  for (const auto& d : defs()) names += (names.empty() ? "" : ", ") + d.info.name;
  throw UsageError("unknown suite '" + config.suite + "' (known: " + names + ")");
}

json summary_json(const SuiteConfig& config, const SuiteResult& result) {
  json checks = json::array();
  for (const auto& c : result.checks)
    checks.push_back({{"name", c.name}, {"verdict", c.pass ? "pass" : "fail"}, {"detail", c.detail}});
  json params = json::object();
  for (const auto& [k, v] : config.params) params[k] = v;
  json j = {{"suite", result.suite},
            {"group", result.group},
            {"seed", result.seed},
            {"params", params},
            {"passed", result.passed()},
            {"checks", checks},
            {"results", result.summary}};
  if (config.depth) j["depth"] = *config.depth;
  if (config.samples) j["samples"] = *config.samples;
  if (config.spec_path) j["spec"] = config.spec_path->filename().string();
  const SuiteCheck* f = result.first_failure();
  j["first_failure"] = f ? json(f->name) : json(nullptr);
  return j;
}

void write_outputs(const std::filesystem::path& dir, const SuiteConfig& config, const SuiteResult& result,
                   double seconds) {
  write_text(dir / "summary.json", summary_json(config, result).dump(2) + "\n");
  for (const auto& t : result.tables) write_text(dir / (t.name + ".csv"), t.to_csv());
  for (const auto& [name, doc] : result.svgs) write_text(dir / name, doc);
  json meta = {{"suite", result.suite},
               {"group", result.group},
               {"seed", result.seed},
               {"runtime_seconds", seconds},
               {"threads", thread_count()}};
  const auto now = std::chrono::system_clock::now();
  meta["finished_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  write_text(dir / "meta.json", meta.dump(2) + "\n");
}

}  // namespace carnot
