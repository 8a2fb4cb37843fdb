#include "bosestab/gn.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {

std::string to_string(GnMethod m) {
  return m == GnMethod::grid_quotient ? "grid-quotient" : "radial-shooting";
}

double gn_quotient(const Field& u) {
  const double quartic = (u.values.abs2().square()).sum() * u.grid.cell_area();
  if (quartic < 1e-14) throw ValidationError("gn_quotient: int |u|^4 below 1e-14");
  return 2.0 * norm_squared(u) * gradient_norm_squared(u) / quartic;
}

double TownesProfile::at(double radius) const {
  if (r.empty() || radius >= r.back()) return 0.0;
  if (radius <= r.front()) return q.front();
  const auto it = std::upper_bound(r.begin(), r.end(), radius);
  const size_t i = static_cast<size_t>(it - r.begin());
  const double t = (radius - r[i - 1]) / (r[i] - r[i - 1]);
  return (1 - t) * q[i - 1] + t * q[i];
}

namespace {

using State = std::array<double, 3>;  // Q, Q', int_0^r Q^2 s ds

enum class Shot { overshoot, undershoot, reached_end };

struct ShotResult {
  Shot kind;
  double mass;
  std::vector<double> r, q;
};

ShotResult integrate_shot(double q0, const ShootingOptions& opt, bool record) {
  namespace odeint = boost::numeric::odeint;
  const double r0 = opt.r_start;
  const double c = (q0 - q0 * q0 * q0) / 4.0;
  State y{q0 + c * r0 * r0, 2.0 * c * r0, 0.5 * q0 * q0 * r0 * r0};
  auto rhs = [](const State& s, State& ds, double r) {
    ds[0] = s[1];
    ds[1] = -s[1] / r + s[0] - s[0] * s[0] * s[0];
    ds[2] = s[0] * s[0] * r;
  };
  auto stepper = odeint::make_controlled(opt.tolerance, opt.tolerance, odeint::runge_kutta_dopri5<State>());
  double r = r0, dr = 1e-3;
  ShotResult out{Shot::reached_end, 0.0, {}, {}};
  if (record) {
    out.r.push_back(0.0);
    out.q.push_back(q0);
  }
  while (r < opt.r_max) {
    dr = std::min(dr, opt.r_max - r);
    if (stepper.try_step(rhs, y, r, dr) != odeint::success) continue;
    if (record) {
      out.r.push_back(r);
      out.q.push_back(y[0]);
    }
    if (y[0] < 0.0) {
      out.kind = Shot::overshoot;
      break;
    }
    if (y[1] > 0.0) {
      out.kind = Shot::undershoot;
      break;
    }
  }
  out.mass = y[2];
  return out;
}

}  // namespace

TownesProfile shoot_townes(const ShootingOptions& opt) {
  auto classify = [&](double q0) {
    const auto s = integrate_shot(q0, opt, false);
    return s.kind;
  };
  double lo = opt.q_low, hi = opt.q_high;
  // lo must undershoot (or reach the end still positive), hi must overshoot.
  if (classify(lo) == Shot::overshoot || classify(hi) != Shot::overshoot) {
    throw ValidationError("shoot_townes: bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] does not straddle the positive solution");
  }
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (classify(mid) == Shot::overshoot ? hi : lo) = mid;
  }
  auto shot = integrate_shot(lo, opt, true);
  // Keep the profile only up to its minimum; past that the undershoot branch
  // is bisection noise.
  const auto min_it = std::min_element(shot.q.begin(), shot.q.end(),
                                       [](double a, double b) { return std::abs(a) < std::abs(b); });
  const size_t keep = static_cast<size_t>(min_it - shot.q.begin()) + 1;
  shot.r.resize(keep);
  shot.q.resize(keep);

  // Mass up to the cut point from the recorded profile tail plus the ODE accumulator.
  ShootingOptions cut = opt;
  cut.r_max = shot.r.back();
  const auto trimmed = integrate_shot(lo, cut, false);

  TownesProfile p;
  p.center_value = lo;
  p.bracket_width = hi - lo;
  p.a_star = 2.0 * std::numbers::pi * trimmed.mass;
  p.r = std::move(shot.r);
  p.q = std::move(shot.q);
  return p;
}

namespace {

GnResult grid_method(const Grid2D& g, double tol) {
  const auto& a = axes(g);
  const double dA = g.cell_area();
  Field u = sample(g, [](double x1, double x2) { return cplx(std::exp(-0.5 * (x1 * x1 + x2 * x2)), 0.0); });
  const Eigen::ArrayXd precond = 1.0 / (1.0 + a.k_squared);

  auto quotient_parts = [&](const Eigen::ArrayXcd& v, double& s, double& t, double& f) {
    s = v.abs2().sum() * dA;
    t = (fft_forward(g, v).abs2() * a.k_squared).sum() * dA / static_cast<double>(g.size());
    f = v.abs2().square().sum() * dA;
  };

  double s, t, f;
  quotient_parts(u.values, s, t, f);
  double J = 2.0 * s * t / f;
  double tau = 0.5;
  GnResult res;
  res.method = GnMethod::grid_quotient;
  const double s0 = s;
  for (int it = 0; it < 5000; ++it) {
    // Gradient of log J scaled by t: (t/s) u - Delta u - (2t/f) |u|^2 u.
    Eigen::ArrayXcd G =
        (t / s) * u.values + minus_laplacian(g, u.values) - (2.0 * t / f) * u.values.abs2() * u.values;
    // Scale fixing: the quotient is dilation invariant, so the box only breaks
    // that symmetry weakly. Remove the dilation generator x.grad u from the
    // gradient so the flow does not drift along the near-flat direction.
    Eigen::ArrayXcd d1, d2;
    gradient(g, u.values, d1, d2);
    const Eigen::ArrayXcd z = a.x1 * d1 + a.x2 * d2 + u.values;
    G -= ((z.conjugate() * G).sum() / z.abs2().sum()) * z;
    res.residual = std::sqrt(G.abs2().sum() * dA / s) / (t / s);
    res.iterations = it;
    if (res.residual <= tol) break;
    const Eigen::ArrayXcd d = fft_inverse(g, fft_forward(g, G) * precond);
    bool accepted = false;
    while (tau > 1e-12) {
      Eigen::ArrayXcd trial = u.values - tau * d;
      double s1, t1, f1;
      quotient_parts(trial, s1, t1, f1);
      const double J1 = 2.0 * s1 * t1 / f1;
      if (J1 <= J * (1.0 + 1e-13)) {
        trial *= std::sqrt(s0 / s1);  // amplitude is a flat direction
        u.values = std::move(trial);
        quotient_parts(u.values, s, t, f);
        J = 2.0 * s * t / f;
        tau = std::min(tau * 1.25, 1.0);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;
  }
  // Amplitude so that u = A Q(sqrt(kappa) x) solves the profile equation at kappa = t/s.
  const double kappa = t / s, coupling = 2.0 * t / f;
  u.values *= std::sqrt(coupling / kappa);
  res.a_star = gn_quotient(u);
  res.Q = std::move(u);
  return res;
}

}  // namespace

GnResult compute_a_star(const Grid2D& g, double tol, GnMethod method) {
  if (g.L < 6.0) throw ValidationError("compute_a_star: domain half-width below 6 soliton lengths");
  if (method == GnMethod::grid_quotient) return grid_method(g, tol);

  const TownesProfile prof = shoot_townes();
  GnResult res;
  res.method = GnMethod::radial_shooting;
  res.a_star = prof.a_star;
  res.residual = prof.bracket_width;
  res.Q = sample(g, [&](double x1, double x2) { return cplx(prof.at(std::hypot(x1, x2)), 0.0); });
  return res;
}

GnComparison compare_a_star(const Grid2D& g, double tol) {
  GnComparison c;
  c.grid = compute_a_star(g, tol, GnMethod::grid_quotient);
  c.shooting = compute_a_star(g, tol, GnMethod::radial_shooting);
  c.relative_gap = std::abs(c.grid.a_star - c.shooting.a_star) / c.shooting.a_star;
  return c;
}

}  // namespace bosestab
