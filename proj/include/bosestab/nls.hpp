#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "bosestab/field.hpp"
#include "bosestab/interaction.hpp"
#include "bosestab/one_body.hpp"
#include "bosestab/potentials.hpp"

namespace bosestab {

// Local cubic nonlinearity (b/2) int |u|^4.
struct DeltaCoupling {
  double b = 0.0;
};

// Finite-range mean field (1/2) int int rho(x) N^{2 beta} w(N^beta (x - y)) rho(y).
struct HartreeCoupling {
  InteractionSpec w;
  int N = 2;
  double beta = 0.5;
};

using Coupling = std::variant<DeltaCoupling, HartreeCoupling>;

// Collapse is declared when the energy drops below energy_threshold while the
// rms width (int |x - <x>|^2 rho)^{1/2} is below width_cells grid spacings.
// A NaN threshold means -1 / (width_cells * spacing)^2, the kinetic scale of
// a state squeezed to the width limit.
struct CollapseCriteria {
  double energy_threshold = std::numeric_limits<double>::quiet_NaN();
  double width_cells = 4.0;
};

struct NlsProblem {
  Grid2D grid;
  PotentialSpec V = PotentialSpec::harmonic();
  VectorPotentialSpec A;
  Coupling coupling = DeltaCoupling{};
  double tolerance = 1e-9;
  int max_iterations = 20000;
  double step = 0.5;  // initial preconditioned-gradient step
  CollapseCriteria collapse;
};

enum class NlsStatus { converged, max_iter, collapse_detected };
std::string to_string(NlsStatus s);

struct NlsResult {
  Field u;
  double energy = 0.0;
  double residual = 0.0;
  NlsStatus status = NlsStatus::max_iter;
  int iterations = 0;
  double width = 0.0;
  std::vector<double> energy_trace;  // accepted iterates, starting with the initial state
};

// Energy functional and its gradient for a fixed problem; precomputes the
// one-body operator and, in Hartree mode, the kernel weights.
class NlsFunctional {
 public:
  explicit NlsFunctional(const NlsProblem& p);

  const NlsProblem& problem() const { return problem_; }
  const OneBodyOperator& one_body() const { return h_; }

  // Mean-field potential b|u|^2 or w_N * |u|^2.
  Eigen::ArrayXd mean_field(const Eigen::ArrayXcd& u) const;
  // Energy without the normalization check.
  double energy_unchecked(const Field& u) const;
  // Gross-Pitaevskii operator applied to u: hu + mean_field(u) u.
  Eigen::ArrayXcd gp_apply(const Eigen::ArrayXcd& u) const;

 private:
  NlsProblem problem_;
  OneBodyOperator h_;
  Eigen::ArrayXd kernel_;  // Hartree weights (empty in delta mode)
};

// <u|h|u> + interaction; rejects ||u|| != 1 +- 1e-8.
double nls_energy(const Field& u, const NlsProblem& problem);

// Normalized preconditioned gradient flow with backtracking. The energy
// sequence is non-increasing. `seed` perturbs the initial state only when
// nonzero (tiny random complex noise), so the default run is deterministic.
NlsResult minimize_nls(const NlsProblem& problem, const Field& init, unsigned long long seed = 0);
NlsResult minimize_nls(const NlsProblem& problem);

// rms width about the centre of mass of |u|^2 (unit-normalized input).
double rms_width(const Field& u);

}  // namespace bosestab
