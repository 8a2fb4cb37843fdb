#pragma once

#include <string>
#include <vector>

#include "bosestab/field.hpp"
#include "bosestab/interaction.hpp"
#include "bosestab/potentials.hpp"

namespace bosestab {

// gamma = sum_j lambda_j |phi_j><phi_j| with orthonormal phi_j.
struct OneBodyMixedState {
  std::vector<Field> modes;
  std::vector<double> weights;

  // Throws ValidationError unless weights >= 0 sum to 1 +- 1e-10 and the modes
  // are orthonormal to 1e-8.
  void validate() const;
  Eigen::ArrayXd density() const;
  static OneBodyMixedState pure(const Field& u);
};

double hartree_energy(const OneBodyMixedState& gamma, const InteractionSpec& w, int N, double beta,
                      const PotentialSpec& V, const VectorPotentialSpec& A);

// int |grad sqrt(rho)|^2 evaluated as int |grad rho|^2 / (4 rho) with
// grad rho = 2 sum_j lambda_j Re(conj(phi_j) grad phi_j).
double sqrt_density_kinetic(const OneBodyMixedState& gamma);

struct HartreeBoundReport {
  double hartree_energy = 0.0;      // E^H[gamma]
  double middle = 0.0;              // int |grad sqrt rho|^2 - (m-/2) int rho^2
  double gn_lower = 0.0;            // (1 - m-/a*) int |grad sqrt rho|^2
  double ho_margin = 0.0;           // tr(h gamma) - int |grad sqrt rho|^2
  double negative_mass = 0.0;
  double a_star = 0.0;
  bool stability_condition = true;  // m- < a*
  bool chain_holds = false;
  std::string flag;
};

// Requires A = 0. slack is the tolerated violation of each link of
// E^H >= middle >= gn_lower >= 0.
HartreeBoundReport hartree_bound_report(const OneBodyMixedState& gamma, const InteractionSpec& w, int N,
                                        double beta, const PotentialSpec& V, const VectorPotentialSpec& A,
                                        double a_star, double slack = 1e-8);

}  // namespace bosestab
