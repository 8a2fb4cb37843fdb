#include "bosestab/validation.hpp"

#include <cmath>
#include <sstream>

#include "bosestab/error.hpp"

namespace bosestab {

bool ValidationReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::failures() const {
  std::ostringstream os;
  for (const auto& c : checks)
    if (!c.passed) os << c.name << ": " << c.detail << "\n";
  return os.str();
}

void require_valid(const ValidationReport& report) {
  if (!report.passed()) throw ValidationError("configuration failed validation:\n" + report.failures());
}

ValidationReport validate_config(const PotentialSpec& V, const VectorPotentialSpec& A, const InteractionSpec& w,
                                 const Grid2D& g, const ScaledRange& scan) {
  ValidationReport rep;
  const auto& ax = axes(g);

  {
    CheckResult c{"trapping bound", true, "V(x) >= |x|^s / c - c at every grid point"};
    const double s = V.exponent, tc = V.trap_constant;
    if (!(s > 0.0) || !(tc > 0.0)) {
      c.passed = false;
      c.detail = "growth exponent s and trap constant c must be positive";
    } else {
      for (long i = 0; i < g.size(); ++i) {
        const double r = std::hypot(ax.x1[i], ax.x2[i]);
        const double v = V(ax.x1[i], ax.x2[i]);
        if (!std::isfinite(v) || v < std::pow(r, s) / tc - tc - 1e-12 * std::abs(v)) {
          std::ostringstream os;
          os << "trapping bound violated at x = (" << ax.x1[i] << ", " << ax.x2[i] << "): V = " << v;
          c.passed = false;
          c.detail = os.str();
          break;
        }
      }
    }
    rep.checks.push_back(c);
  }

  {
    CheckResult c{"vector potential bounded", true, "|A| finite on the domain"};
    double amax = 0.0;
    for (long i = 0; i < g.size(); ++i) {
      const auto a = A(ax.x1[i], ax.x2[i]);
      const double m = std::hypot(a[0], a[1]);
      if (!std::isfinite(m)) {
        c.passed = false;
        c.detail = "|A| is not finite on the grid";
        break;
      }
      amax = std::max(amax, m);
    }
    if (c.passed) c.detail = "max |A| = " + std::to_string(amax);
    if (c.passed && A.kind == VectorPotentialKind::uniform_field) {
      for (double p : {-1.3, 0.0, 0.7, 2.1}) {
        const double curl = curl_fd(A, p, 0.5 * p);
        if (std::abs(curl - A.field_strength) > 1e-6) {
          c.passed = false;
          c.detail = "curl A differs from B by " + std::to_string(std::abs(curl - A.field_strength));
        }
      }
    }
    rep.checks.push_back(c);
  }

  {
    const double l1 = w.l1_norm();
    const double l2 = w.l2_norm_squared();
    CheckResult c1{"interaction L1", std::isfinite(l1), "int |w| = " + std::to_string(l1)};
    CheckResult c2{"interaction L2", std::isfinite(l2), "int w^2 = " + std::to_string(l2)};
    rep.checks.push_back(c1);
    rep.checks.push_back(c2);
  }

  {
    CheckResult c{"interaction symmetry", true, "w(x) = w(-x) on the grid"};
    double wmax = 0.0;
    for (long i = 0; i < g.size(); ++i) wmax = std::max(wmax, std::abs(w(ax.x1[i], ax.x2[i])));
    for (long i = 0; i < g.size() && c.passed; ++i) {
      const double a = w(ax.x1[i], ax.x2[i]);
      const double b = w(-ax.x1[i], -ax.x2[i]);
      if (std::abs(a - b) > 1e-12 * std::max(wmax, 1e-300)) {
        std::ostringstream os;
        os << "w(x) != w(-x) at x = (" << ax.x1[i] << ", " << ax.x2[i] << ")";
        c.passed = false;
        c.detail = os.str();
      }
    }
    rep.checks.push_back(c);
  }

  {
    CheckResult c{"interaction resolution", is_resolved(w, scan.max_N, scan.max_beta, g), ""};
    const double eff = w.min_length_scale() * std::pow(static_cast<double>(scan.max_N), -scan.max_beta);
    std::ostringstream os;
    os << "scaled range " << eff << (c.passed ? " >= " : " < ") << "2 grid spacings " << 2.0 * g.spacing()
       << " at N=" << scan.max_N << ", beta=" << scan.max_beta;
    c.detail = os.str();
    if (!c.passed) c.detail = "under-resolved interaction: " + c.detail;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace bosestab
