#include "bosestab/localization.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bosestab/error.hpp"
#include "bosestab/hamiltonian.hpp"

namespace bosestab {

namespace {

double first_moment(const Rdm& g1, const Eigen::VectorXd& e) {
  double s = 0.0;
  for (int i = 0; i < g1.d; ++i) s += e[i] * g1.matrix(i, i).real();
  return s;
}

double second_moment(const Rdm& g2, const Eigen::VectorXd& e) {
  const int d = g2.d;
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += e[i] * e[j] * g2.matrix(i * d + j, i * d + j).real();
  return s;
}

}  // namespace

LocalizationReport localization_defect(const Rdm& g2, const ModeBasis& basis, const TwoBodyTensor& W, int d_small,
                                       double delta) {
  const int d = basis.size();
  if (g2.k != 2 || g2.d != d || W.d != d) throw ValidationError("localization_defect: dimension mismatch");
  if (d_small < 1 || d_small >= d) {
    throw ValidationError("localization_defect: need 1 <= d_small < d_big (no defect to measure otherwise)");
  }
  if (!(delta > 0.5 && delta <= 1.0)) throw ValidationError("localization_defect: delta must lie in (1/2, 1]");
  const Eigen::MatrixXcd H2 = two_body_hamiltonian(basis.energies, W);
  const Eigen::MatrixXcd prod = H2 * g2.matrix;
  double full = prod.trace().real(), inside = 0.0;
  // tr(P H2 P gamma2) keeps only pair indices inside the small block.
  for (int i = 0; i < d_small; ++i)
    for (int j = 0; j < d_small; ++j)
      for (int k = 0; k < d_small; ++k)
        for (int l = 0; l < d_small; ++l)
          inside += (H2(i * d + j, k * d + l) * g2.matrix(k * d + l, i * d + j)).real();

  LocalizationReport r;
  r.lhs = full - inside;
  r.delta = delta;
  r.d_small = d_small;
  r.d_big = d;
  r.lambda = basis.energies[d_small - 1];
  r.splits_level = basis.energies[d_small] - r.lambda < kDegeneracyTolerance * (1 + std::abs(r.lambda));
  r.first_moment = first_moment(partial_trace(g2), basis.energies);
  r.second_moment = second_moment(g2, basis.energies);
  r.scale = std::pow(r.lambda, 0.5 * (delta - 1)) * std::pow(r.first_moment, 0.5 * (1 - delta)) *
            std::pow(r.second_moment, delta);
  r.fitted_C = r.scale > 0.0 ? std::max(0.0, -r.lhs) / r.scale : 0.0;
  r.pass = std::isfinite(r.fitted_C) && r.lhs >= -r.fitted_C * r.scale * (1 + 1e-12) - 1e-15;
  return r;
}

LocalizationReport localization_defect(const Rdm& g2, const ModeBasis& basis, const InteractionSpec& w, int N,
                                       double beta, int d_small, double delta) {
  return localization_defect(g2, basis, two_body_elements(basis, w, N, beta), d_small, delta);
}

MomentReport moment_report(const ManyBodyResult& result, const Rdm& g1, const Rdm& g2, const ModeBasis& basis,
                           double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("moment_report: eps must lie in (0, 1); the bounds divide by eps");
  if (std::abs(result.eps - eps) > 1e-15) throw ValidationError("moment_report: result was assembled with another eps");
  if (g1.k != 1 || g2.k != 2 || g1.d != basis.size() || g2.d != basis.size()) {
    throw ValidationError("moment_report: dimension mismatch");
  }
  MomentReport m;
  m.eps = eps;
  m.e_eps = result.e_N;
  m.first_moment = first_moment(g1, basis.energies);
  m.second_moment = second_moment(g2, basis.energies);
  m.first_bound = (1.0 + std::abs(m.e_eps)) / eps;
  m.second_bound = m.first_bound * m.first_bound;
  m.fitted_C = std::max(m.first_moment / m.first_bound, m.second_moment / m.second_bound);
  return m;
}

TailBound interaction_tail_bound(const InteractionSpec& w, int N, double beta, double lambda, double C) {
  TailBound t;
  if (w.is_zero()) return t;
  if (!(lambda > 0.0) || !(C >= 0.0) || N < 2 || !(beta > 0.0)) throw ValidationError("interaction_tail_bound: bad input");
  using boost::math::quadrature::gauss_kronrod;
  const double s = std::pow(static_cast<double>(N), -beta), R = 1.0 / s;
  const double CL = C * C * lambda;
  // Angular average of |w^(s k)| on the circle |k| = r.
  auto ring = [&](double r) {
    const int m = 32;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * std::numbers::pi * j / m;
      acc += std::abs(w.fourier(s * r * std::cos(th), s * r * std::sin(th)));
    }
    return 2.0 * std::numbers::pi * acc / m;
  };
  t.inner = gauss_kronrod<double, 31>::integrate([&](double r) { return std::min(1.0, CL / (r * r)) * ring(r) * r; },
                                                  0.0, 1.0, 10, 1e-12);
  t.middle = gauss_kronrod<double, 31>::integrate([&](double r) { return CL / r * ring(r); }, 1.0, R, 15, 1e-12);
  t.outer = gauss_kronrod<double, 31>::integrate([&](double r) { return CL / r * ring(r); }, R,
                                                  std::numeric_limits<double>::infinity(), 15, 1e-12);
  t.total = t.inner + t.middle + t.outer;
  double peak = 0.0;
  for (double k = 0.0; k <= 20.0 / std::max(w.min_length_scale(), 1e-6); k += 0.05 / std::max(w.min_length_scale(), 1e-6))
    peak = std::max(peak, std::abs(w.fourier(k, 0.0)));
  t.log_reference = 2.0 * std::numbers::pi * peak * CL * beta * std::log(static_cast<double>(N));
  return t;
}

}  // namespace bosestab
