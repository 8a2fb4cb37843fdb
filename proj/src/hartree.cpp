#include "bosestab/hartree.hpp"

#include <cmath>

#include "bosestab/error.hpp"
#include "bosestab/one_body.hpp"

namespace bosestab {

void OneBodyMixedState::validate() const {
  if (modes.empty() || modes.size() != weights.size())
    throw ValidationError("mixed state: modes and weights must be non-empty and of equal length");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("mixed state: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw ValidationError("mixed state: weights do not sum to 1");
  for (size_t i = 0; i < modes.size(); ++i)
    for (size_t j = 0; j <= i; ++j) {
      const cplx ov = inner(modes[i], modes[j]);
      if (std::abs(ov - (i == j ? 1.0 : 0.0)) > 1e-8) throw ValidationError("mixed state: modes not orthonormal");
    }
}

Eigen::ArrayXd OneBodyMixedState::density() const {
  Eigen::ArrayXd rho = Eigen::ArrayXd::Zero(modes.front().grid.size());
  for (size_t j = 0; j < modes.size(); ++j) rho += weights[j] * modes[j].values.abs2();
  return rho;
}

OneBodyMixedState OneBodyMixedState::pure(const Field& u) { return {{u}, {1.0}}; }

namespace {

double interaction_term(const Grid2D& g, const Eigen::ArrayXd& rho, const InteractionSpec& w, int N, double beta) {
  if (w.is_zero()) return 0.0;
  require_resolved(w, N, beta, g);
  const Eigen::ArrayXd kernel = fourier_weights(w, N, beta, g);
  const Eigen::ArrayXd conv = convolve(g, rho.cast<cplx>(), kernel).real();
  return 0.5 * (conv * rho).sum() * g.cell_area();
}

double trace_h(const OneBodyMixedState& gamma, const OneBodyOperator& h) {
  double acc = 0.0;
  for (size_t j = 0; j < gamma.modes.size(); ++j) acc += gamma.weights[j] * h.expectation(gamma.modes[j]);
  return acc;
}

}  // namespace

double hartree_energy(const OneBodyMixedState& gamma, const InteractionSpec& w, int N, double beta,
                      const PotentialSpec& V, const VectorPotentialSpec& A) {
  gamma.validate();
  const Grid2D& g = gamma.modes.front().grid;
  const OneBodyOperator h(g, V, A);
  return trace_h(gamma, h) + interaction_term(g, gamma.density(), w, N, beta);
}

double sqrt_density_kinetic(const OneBodyMixedState& gamma) {
  const Grid2D& g = gamma.modes.front().grid;
  const Eigen::ArrayXd rho = gamma.density();
  Eigen::ArrayXd g1 = Eigen::ArrayXd::Zero(g.size()), g2 = Eigen::ArrayXd::Zero(g.size());
  for (size_t j = 0; j < gamma.modes.size(); ++j) {
    Eigen::ArrayXcd d1, d2;
    gradient(g, gamma.modes[j].values, d1, d2);
    const Eigen::ArrayXcd c = gamma.modes[j].values.conjugate();
    g1 += 2.0 * gamma.weights[j] * (c * d1).real();
    g2 += 2.0 * gamma.weights[j] * (c * d2).real();
  }
  const double floor = 1e-300;
  double acc = 0.0;
  for (long i = 0; i < g.size(); ++i)
    if (rho[i] > floor) acc += (g1[i] * g1[i] + g2[i] * g2[i]) / (4.0 * rho[i]);
  return acc * g.cell_area();
}

HartreeBoundReport hartree_bound_report(const OneBodyMixedState& gamma, const InteractionSpec& w, int N,
                                        double beta, const PotentialSpec& V, const VectorPotentialSpec& A,
                                        double a_star, double slack) {
  if (!A.is_zero()) throw ValidationError("hartree_bound_report requires A = 0");
  gamma.validate();
  const Grid2D& g = gamma.modes.front().grid;
  const OneBodyOperator h(g, V, A);
  const Eigen::ArrayXd rho = gamma.density();

  HartreeBoundReport r;
  r.a_star = a_star;
  r.negative_mass = w.negative_mass();
  const double th = trace_h(gamma, h);
  const double kin_sqrt = sqrt_density_kinetic(gamma);
  const double rho2 = rho.square().sum() * g.cell_area();
  r.hartree_energy = th + interaction_term(g, rho, w, N, beta);
  r.middle = kin_sqrt - 0.5 * r.negative_mass * rho2;
  r.gn_lower = (1.0 - r.negative_mass / a_star) * kin_sqrt;
  r.ho_margin = th - kin_sqrt;
  r.stability_condition = r.negative_mass < a_star;
  if (!r.stability_condition) {
    r.flag = "stability condition violated: int |w_-| >= a*";
    r.chain_holds = false;
    return r;
  }
  r.chain_holds = r.hartree_energy - r.middle >= -slack && r.middle - r.gn_lower >= -slack && r.gn_lower >= -slack;
  if (!r.chain_holds) r.flag = "inequality chain violated";
  return r;
}

}  // namespace bosestab
