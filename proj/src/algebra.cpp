#include "carnot/algebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "carnot/error.hpp"

namespace carnot {

namespace {

struct Normalized {
  std::vector<Algebra::Entry> entries;
  std::vector<Violation> antisymmetry;
};

void check_structure(const StratificationSpec& spec) {
  if (spec.strata.empty()) throw SpecError("spec '" + spec.name + "': no strata");
  for (int d : spec.strata)
    if (d <= 0) throw SpecError("spec '" + spec.name + "': stratum dimensions must be positive");
  const int n = spec.dimension();
  if (n > static_cast<int>(kMaxDim))
    throw SpecError("spec '" + spec.name + "': dimension " + std::to_string(n) + " exceeds " +
                    std::to_string(kMaxDim));
  for (const auto& sc : spec.brackets) {
    if (sc.i < 1 || sc.i > n || sc.j < 1 || sc.j > n || sc.k < 1 || sc.k > n) {
      std::ostringstream os;
      os << "spec '" << spec.name << "': bracket entry (" << sc.i << "," << sc.j << "," << sc.k
         << ") has an index outside [1," << n << "]";
      throw SpecError(os.str());
    }
    if (!std::isfinite(sc.c)) throw SpecError("spec '" + spec.name + "': non-finite structure constant");
  }
}

// Folds entries onto a < b. An (i,j) entry and a (j,i) entry for the same k
// must agree up to sign; repeated entries must agree exactly.
Normalized normalize(const StratificationSpec& spec) {
  Normalized out;
  std::map<std::tuple<int, int, int>, double> table;
  for (const auto& sc : spec.brackets) {
    int a = sc.i - 1, b = sc.j - 1, k = sc.k - 1;
    double c = sc.c;
    if (a == b) {
      if (std::fabs(c) > kAlgebraTolerance) {
        std::ostringstream os;
        os << "[X" << sc.i << ",X" << sc.i << "] has nonzero coefficient " << c << " on X" << sc.k;
        out.antisymmetry.push_back({"antisymmetry", os.str()});
      }
      continue;
    }
    if (a > b) {
      std::swap(a, b);
      c = -c;
    }
    auto key = std::make_tuple(a, b, k);
    auto it = table.find(key);
    if (it == table.end()) {
      table.emplace(key, c);
    } else if (std::fabs(it->second - c) > kAlgebraTolerance) {
      std::ostringstream os;
      os << "entries for [X" << a + 1 << ",X" << b + 1 << "] on X" << k + 1
         << " disagree: " << it->second << " vs " << c;
      out.antisymmetry.push_back({"antisymmetry", os.str()});
    }
  }
  for (const auto& [key, c] : table) {
    if (c == 0.0) continue;
    out.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
  }
  return out;
}

std::vector<int> degrees_of(const StratificationSpec& spec) {
  std::vector<int> deg;
  for (std::size_t j = 0; j < spec.strata.size(); ++j)
    for (int d = 0; d < spec.strata[j]; ++d) deg.push_back(static_cast<int>(j) + 1);
  return deg;
}

Coords<double> raw_bracket(const std::vector<Algebra::Entry>& entries, int n, const Coords<double>& u,
                           const Coords<double>& v) {
  Coords<double> out(static_cast<std::size_t>(n));
  for (const auto& e : entries) out[e.k] += e.c * (u[e.a] * v[e.b] - u[e.b] * v[e.a]);
  return out;
}

Coords<double> unit(int n, int i) {
  Coords<double> v(static_cast<std::size_t>(n));
  v[i] = 1.0;
  return v;
}

}  // namespace

int StratificationSpec::dimension() const {
  int n = 0;
  for (int d : strata) n += d;
  return n;
}

bool ValidationReport::has(const std::string& invariant) const {
  for (const auto& v : violations)
    if (v.invariant == invariant) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].invariant << ": " << violations[i].detail;
  }
  return os.str();
}

ValidationReport validate_stratification(const StratificationSpec& spec) {
  check_structure(spec);
  ValidationReport report;
  const int n = spec.dimension();
  const int s = spec.step();
  const auto deg = degrees_of(spec);
  Normalized norm = normalize(spec);
  report.violations = norm.antisymmetry;

  for (const auto& e : norm.entries) {
    if (std::fabs(e.c) <= kAlgebraTolerance) continue;
    const int want = deg[e.a] + deg[e.b];
    if (deg[e.k] != want) {
      std::ostringstream os;
      os << "[X" << e.a + 1 << ",X" << e.b + 1 << "] lands on X" << e.k + 1 << " in V" << deg[e.k]
         << ", expected " << (want > s ? std::string("zero") : "V" + std::to_string(want));
      report.violations.push_back({"grading", os.str()});
    }
  }

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const auto xa = unit(n, a), xb = unit(n, b), xc = unit(n, c);
        auto jac = raw_bracket(norm.entries, n, xa, raw_bracket(norm.entries, n, xb, xc)) +
                   raw_bracket(norm.entries, n, xb, raw_bracket(norm.entries, n, xc, xa)) +
                   raw_bracket(norm.entries, n, xc, raw_bracket(norm.entries, n, xa, xb));
        if (max_abs(jac) > kAlgebraTolerance) {
          std::ostringstream os;
          os << "Jacobi fails on (X" << a + 1 << ",X" << b + 1 << ",X" << c + 1 << ") by " << max_abs(jac);
          report.violations.push_back({"jacobi", os.str()});
        }
      }

  std::vector<int> offset(s, 0);
  for (int j = 1; j < s; ++j) offset[j] = offset[j - 1] + spec.strata[j - 1];
  for (int i = 1; i < s; ++i) {
    const int rows = spec.strata[i];
    std::vector<Eigen::VectorXd> cols;
    for (int a = 0; a < spec.strata[0]; ++a)
      for (int b = offset[i - 1]; b < offset[i - 1] + spec.strata[i - 1]; ++b) {
        auto br = raw_bracket(norm.entries, n, unit(n, a), unit(n, b));
        Eigen::VectorXd col(rows);
        for (int r = 0; r < rows; ++r) col[r] = br[offset[i] + r];
        cols.push_back(col);
      }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    long rank = 0;
    if (m.cols() > 0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      lu.setThreshold(kAlgebraTolerance);
      rank = lu.rank();
    }
    if (rank != rows) {
      std::ostringstream os;
      os << "[V1,V" << i << "] has rank " << rank << " in V" << i + 1 << " of dimension " << rows;
      report.violations.push_back({"generation", os.str()});
    }
  }
  return report;
}

bool same_structure(const StratificationSpec& a, const StratificationSpec& b) {
  if (a.strata != b.strata) return false;
  auto na = normalize(a), nb = normalize(b);
  if (na.entries.size() != nb.entries.size()) return false;
  for (std::size_t i = 0; i < na.entries.size(); ++i) {
    const auto& x = na.entries[i];
    const auto& y = nb.entries[i];
    if (x.a != y.a || x.b != y.b || x.k != y.k || x.c != y.c) return false;
  }
  return true;
}

Algebra::Algebra(StratificationSpec spec) : spec_(std::move(spec)) {
  auto report = validate_stratification(spec_);
  if (!report.ok()) throw SpecError("spec '" + spec_.name + "' is not a stratified algebra: " + report.summary());
  n_ = spec_.dimension();
  degree_ = degrees_of(spec_);
  offsets_.assign(spec_.strata.size(), 0);
  for (std::size_t j = 1; j < spec_.strata.size(); ++j) offsets_[j] = offsets_[j - 1] + spec_.strata[j - 1];
  entries_ = normalize(spec_).entries;
}

int Algebra::homogeneous_dimension() const { return carnot::homogeneous_dimension(spec_); }

Vector Algebra::horizontal(const Vector& v1) const {
  if (static_cast<int>(v1.size()) != stratum_dim(1))
    throw SpecMismatch("horizontal vector has length " + std::to_string(v1.size()) + ", expected " +
                       std::to_string(stratum_dim(1)));
  Vector out(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < v1.size(); ++i) out[i] = v1[i];
  return out;
}

Vector Algebra::basis(int i) const { return unit(n_, i); }

int homogeneous_dimension(const StratificationSpec& spec) {
  int q = 0;
  for (std::size_t j = 0; j < spec.strata.size(); ++j) q += static_cast<int>(j + 1) * spec.strata[j];
  return q;
}

}  // namespace carnot
