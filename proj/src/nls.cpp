#include "bosestab/nls.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {

std::string to_string(NlsStatus s) {
  switch (s) {
    case NlsStatus::converged:
      return "converged";
    case NlsStatus::max_iter:
      return "max-iter";
    case NlsStatus::collapse_detected:
      return "collapse-detected";
  }
  return "?";
}

NlsFunctional::NlsFunctional(const NlsProblem& p) : problem_(p), h_(p.grid, p.V, p.A) {
  if (!(p.tolerance > 0.0)) throw ValidationError("nls: tolerance must be positive");
  if (const auto* hc = std::get_if<HartreeCoupling>(&p.coupling)) {
    require_resolved(hc->w, hc->N, hc->beta, p.grid);
    kernel_ = fourier_weights(hc->w, hc->N, hc->beta, p.grid);
  }
}

Eigen::ArrayXd NlsFunctional::mean_field(const Eigen::ArrayXcd& u) const {
  const Eigen::ArrayXd rho = u.abs2();
  if (const auto* d = std::get_if<DeltaCoupling>(&problem_.coupling)) return d->b * rho;
  return convolve(problem_.grid, rho.cast<cplx>(), kernel_).real();
}

double NlsFunctional::energy_unchecked(const Field& u) const {
  const Eigen::ArrayXd rho = u.values.abs2();
  return h_.expectation(u) + 0.5 * (mean_field(u.values) * rho).sum() * problem_.grid.cell_area();
}

Eigen::ArrayXcd NlsFunctional::gp_apply(const Eigen::ArrayXcd& u) const {
  return h_.apply(u) + mean_field(u) * u;
}

double nls_energy(const Field& u, const NlsProblem& problem) {
  if (!(u.grid == problem.grid)) throw ValidationError("nls_energy: field grid does not match problem grid");
  const double nrm = norm(u);
  if (std::abs(nrm - 1.0) > 1e-8) {
    throw ValidationError("nls_energy: input not normalized (||u|| = " + std::to_string(nrm) + ")");
  }
  return NlsFunctional(problem).energy_unchecked(u);
}

double rms_width(const Field& u) {
  const auto& a = axes(u.grid);
  const Eigen::ArrayXd rho = u.values.abs2();
  const double mass = rho.sum();
  const double c1 = (rho * a.x1).sum() / mass;
  const double c2 = (rho * a.x2).sum() / mass;
  const double m2 = (rho * ((a.x1 - c1).square() + (a.x2 - c2).square())).sum() / mass;
  return std::sqrt(m2);
}

namespace {

// Combined preconditioner s (alpha - Delta)^{-1} s with s = sqrt(alpha / (alpha + V)).
class Preconditioner {
 public:
  Preconditioner(const Grid2D& g, const Eigen::ArrayXd& V, double alpha)
      : grid_(g), s_((alpha / (alpha + V.max(0.0))).sqrt()), inv_(1.0 / (alpha + axes(g).k_squared)) {
    inv_ *= alpha;
  }
  Eigen::ArrayXcd apply(const Eigen::ArrayXcd& r) const {
    return s_ * fft_inverse(grid_, fft_forward(grid_, s_ * r) * inv_);
  }

 private:
  Grid2D grid_;
  Eigen::ArrayXd s_;
  Eigen::ArrayXd inv_;
};

}  // namespace

NlsResult minimize_nls(const NlsProblem& problem, const Field& init, unsigned long long seed) {
  if (!(init.grid == problem.grid)) throw ValidationError("minimize_nls: initial field grid mismatch");
  const NlsFunctional F(problem);
  const Grid2D& g = problem.grid;
  const double dA = g.cell_area();

  Field u = init;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1e-6);
    const Eigen::ArrayXd env = init.values.abs();
    for (long i = 0; i < u.values.size(); ++i) u.values[i] += env[i] * cplx(nd(rng), nd(rng));
  }
  u = normalized(u);

  const Preconditioner P(g, F.one_body().potential(), 2.0);
  const double min_width = problem.collapse.width_cells * g.spacing();
  const double energy_floor = std::isnan(problem.collapse.energy_threshold)
                                  ? -1.0 / (min_width * min_width)
                                  : problem.collapse.energy_threshold;
  auto dot = [&](const Eigen::ArrayXcd& a, const Eigen::ArrayXcd& b) {
    return (a.conjugate() * b).sum().real() * dA;
  };
  // Projected gradient gp(u) - mu u at a unit vector.
  auto tangent_residual = [&](const Eigen::ArrayXcd& v) {
    const Eigen::ArrayXcd Hv = F.gp_apply(v);
    return Eigen::ArrayXcd(Hv - dot(v, Hv) * v);
  };

  NlsResult res;
  double E = F.energy_unchecked(u);
  res.energy_trace.push_back(E);
  double tau = problem.step;
  Eigen::ArrayXcd r = tangent_residual(u.values);
  Eigen::ArrayXcd dir, r_prev, pr_prev;
  int since_restart = 0;

  for (int it = 0;; ++it) {
    res.residual = std::sqrt(dot(r, r));
    res.iterations = it;
    if (res.residual <= problem.tolerance) {
      res.status = NlsStatus::converged;
      break;
    }
    if (it >= problem.max_iterations) {
      res.status = NlsStatus::max_iter;
      break;
    }
    // Preconditioned Polak-Ribiere direction in the tangent space of the
    // unit sphere, restarted on loss of descent.
    const Eigen::ArrayXcd pr = P.apply(r);
    double beta = 0.0;
    if (since_restart > 0 && since_restart < 50) beta = std::max(0.0, dot(r - r_prev, pr) / dot(r_prev, pr_prev));
    Eigen::ArrayXcd cand = beta > 0.0 ? Eigen::ArrayXcd(-pr + beta * dir) : Eigen::ArrayXcd(-pr);
    cand -= dot(u.values, cand) * u.values;
    double slope = 2.0 * dot(r, cand);
    if (!(slope < 0.0)) {
      cand = -pr;
      cand -= dot(u.values, cand) * u.values;
      slope = 2.0 * dot(r, cand);
      since_restart = 0;
    }
    dir = std::move(cand);
    r_prev = r;
    pr_prev = pr;

    // Secant search on the directional derivative, which stays accurate
    // where energy differences drown in rounding.
    double t = tau, t_lo = 0.0, s_lo = slope;
    bool accepted = false;
    Field trial;
    Eigen::ArrayXcd r_t;
    double E_t = E;
    for (int ls = 0; ls < 30; ++ls) {
      const Eigen::ArrayXcd w = u.values + t * dir;
      const double wn = std::sqrt(dot(w, w));
      trial = Field(g, w / wn);
      E_t = F.energy_unchecked(trial);
      if (!std::isfinite(E_t) || E_t > E + 1e-12) {
        t = 0.5 * (t_lo + t);
        continue;
      }
      r_t = tangent_residual(trial.values);
      const double s_t = 2.0 * dot(r_t, dir) / wn;
      if (std::abs(s_t) <= 0.5 * std::abs(slope) || E_t < energy_floor) {
        accepted = true;
        break;
      }
      double next;
      if (s_t < 0.0) {
        // Still descending: extrapolate, or expand when the model is concave.
        next = s_t > s_lo ? t + (t - t_lo) * s_t / (s_lo - s_t) : 2.0 * t;
        next = std::min(next, 4.0 * t);
        t_lo = t;
        s_lo = s_t;
      } else {
        next = t_lo + (t - t_lo) * s_lo / (s_lo - s_t);
      }
      if (ls == 29 || !(next > 0.0)) {
        accepted = true;
        break;
      }
      t = next;
    }
    if (!accepted || r_t.size() == 0) {
      res.status = NlsStatus::max_iter;
      break;
    }
    u = std::move(trial);
    E = E_t;
    r = std::move(r_t);
    tau = t;
    ++since_restart;
    res.energy_trace.push_back(E);
    if (E < energy_floor && rms_width(u) < min_width) {
      res.status = NlsStatus::collapse_detected;
      res.iterations = it + 1;
      break;
    }
  }
  res.energy = E;
  res.width = rms_width(u);
  res.u = std::move(u);
  return res;
}

NlsResult minimize_nls(const NlsProblem& problem) {
  return minimize_nls(problem, oscillator_gaussian(problem.grid), 0);
}

}  // namespace bosestab
