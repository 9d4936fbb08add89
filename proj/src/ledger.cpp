#include "carnot/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "carnot/parallel.hpp"

namespace carnot {

namespace {

const double kLog2 = std::log(2.0);

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("ledger input ") + name + " must be positive");
}

LedgerCheck make_check(std::string name, double log_lhs, double log_rhs, std::string shrink) {
  LedgerCheck c;
  c.name = std::move(name);
  c.log_lhs = log_lhs;
  c.log_rhs = log_rhs;
  c.pass = log_lhs < log_rhs;
  if (!c.pass) c.shrink = std::move(shrink);
  return c;
}

// Largest log C_11 for which C_11 < 1 and 10 C_4 < min{1/100, C_7/10, C_surj/10}.
double log_C11_budget(const ConstantLedger& L) {
  const auto& in = L.inputs;
  const double bound = std::min({0.01, L.C7 / 10.0, in.c_surj / 10.0});
  const double sM = std::pow(static_cast<double>(in.s), in.M);
  const double from_C2 = sM * (std::log(bound / 10.0) - in.M * std::log(2.0 * std::max(in.C, 1.0)));
  return std::min(0.0, from_C2);
}

}  // namespace

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

bool ConstantLedger::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LedgerCheck& c) { return c.pass; });
}

const LedgerCheck* ConstantLedger::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

const LedgerCheck& ConstantLedger::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw DomainError("no ledger check named " + name);
}

ConstantLedger constant_ledger(const LedgerInputs& in) {
  require_positive(in.diam, "diam");
  require_positive(in.c0, "c0");
  require_positive(in.lambda, "lambda");
  require_positive(in.lip_phi, "lip_phi");
  require_positive(in.C, "C");
  require_positive(in.C1, "C1");
  require_positive(in.xi, "xi");
  require_positive(in.c_surj, "c_surj");
  if (in.s < 1) throw DomainError("ledger input s must be at least 1");
  if (in.M < 1) throw DomainError("ledger input M must be at least 1");
  if (!(in.lambda < in.diam / 4.0)) {
    std::ostringstream os;
    os << "ledger needs lambda < diam/4, got lambda = " << in.lambda << " and diam = " << in.diam;
    throw DomainError(os.str());
  }

  ConstantLedger L;
  L.inputs = in;
  const double d1 = in.diam + 1.0;
  const double s = in.s;
  L.eps1 = std::min(in.lambda, in.xi);

  L.log_K1_bound = std::min(std::log(L.eps1) - std::log(32.0 * d1 * in.c0 * (in.C1 + 2.0 * in.lip_phi)), std::log(0.01));
  L.log_K1 = in.log_K1 ? *in.log_K1 : L.log_K1_bound - kLog2;

  L.C7 = 4.0 * in.c0 * d1;
  L.N = 2.0 * (8.0 * in.M * in.c0 * d1 + 1.0) / in.lambda;
  L.log_C6_bound = std::log(std::min({L.eps1 / (4.0 * in.lip_phi), 1.0 / (100.0 + L.N), L.C7 / 100.0}));
  L.log_C6 = in.log_C6 ? *in.log_C6 : L.log_C6_bound - kLog2;
  L.C5 = 8.0 * in.M * (2.0 + 64.0 * d1 * in.c0);

  const double t1 = std::log(in.C) + (L.log_C6 + std::log(in.lip_phi)) / s;
  const double t2 = std::log(4.0) + L.log_K1 + std::log(2.0 * in.C1 + 4.0 * in.lip_phi) + std::log(d1 * in.c0);
  L.log_C11 = log_add(t1, t2);
  L.log_C4 = L.log_C11 / std::pow(s, in.M) + in.M * std::log(2.0 * std::max(in.C, 1.0));
  L.log_C2 = std::log(10.0) + L.log_C4;

  const double c2_bound = std::min({0.01, L.C7 / 10.0, in.c_surj / 10.0});
  L.checks.push_back(make_check("K1_bound", L.log_K1, L.log_K1_bound, "K1"));
  L.checks.push_back(make_check("C6_bound", L.log_C6, L.log_C6_bound, "C6"));
  L.checks.push_back(make_check("C11_below_one", L.log_C11, 0.0, t1 >= t2 ? "C6" : "K1"));
  L.checks.push_back(make_check("C2_bound", L.log_C2, std::log(c2_bound), t1 >= t2 ? "C6" : "K1"));
  const double rhs = (8.0 * in.M * in.c0 * d1 + std::exp(L.log_C2)) / in.lambda;
  L.checks.push_back(make_check("N_bound", std::log(rhs), std::log(L.N), "K1"));
  return L;
}

ConstantLedger shrink_ledger(LedgerInputs in, int max_rounds) {
  ConstantLedger L = constant_ledger(in);
  const double s = in.s;
  const double d1 = in.diam + 1.0;
  for (int round = 0; round < max_rounds && !L.all_pass(); ++round) {
    // Split the C_11 budget evenly between its two terms, one factor of 2
    // below the target each.
    const double target = log_C11_budget(L) - 2.0 * kLog2 - round * kLog2;
    const double k1 = target - std::log(4.0 * (2.0 * in.C1 + 4.0 * in.lip_phi) * d1 * in.c0);
    const double c6 = s * (target - std::log(in.C)) - std::log(in.lip_phi);
    in.log_K1 = std::min(k1, L.log_K1_bound - kLog2);
    in.log_C6 = std::min(c6, L.log_C6_bound - kLog2);
    L = constant_ledger(in);
    L.shrink_rounds = round + 1;
  }
  return L;
}

double conjugation_constant(const HomogeneousNorm& norm, double radius, std::size_t samples, std::uint64_t seed) {
  const CarnotGroup& g = *norm.group();
  const double q = g.homogeneous_dimension();
  const double s = g.step();
  return parallel_reduce(
      samples, 4096, 0.0,
      [&](std::size_t c, std::size_t b, std::size_t e) {
        Rng rng = make_rng(seed, c);
        double best = 0.0;
        for (std::size_t i = b; i < e; ++i) {
          const Vector x = g.dilate(radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / q), norm.sample_unit_sphere(rng));
          const Vector y = g.dilate(radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / q), norm.sample_unit_sphere(rng));
          const double nx = norm(x);
          if (nx == 0.0) continue;
          const double v = norm(g.multiply(g.multiply(g.inverse(y), x), y)) / std::pow(nx, 1.0 / s);
          best = std::max(best, v);
        }
        return best;
      },
      [](double a, double b) { return std::max(a, b); });
}

}  // namespace carnot
