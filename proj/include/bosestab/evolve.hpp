#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bosestab/hamiltonian.hpp"
#include "bosestab/modes.hpp"
#include "bosestab/propagate.hpp"

namespace bosestab {

struct EvolveOptions {
  int krylov = 30;
  double tolerance = 1e-12;  // local error estimate per step
  long max_dim = 20000;
  int record_every = 1;
};

struct ManyBodyTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  std::vector<Eigen::MatrixXcd> gamma1;
  std::vector<double> norms;
  std::vector<double> energies;
  std::vector<double> trace_distance;  // against the reference, when supplied
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
  int substeps = 0;
  int rejected = 0;
};

// exp(-i H t) psi0 by Krylov steps of size dt (subdivided when the local error
// estimate exceeds the tolerance). With a basis and an NLS trajectory on the
// same time grid, records Tr |gamma1(t) - |u(t)><u(t)|| at every stored time.
ManyBodyTrajectory evolve(const Eigen::VectorXcd& psi0, const FockHamiltonian& H, double T, double dt,
                          const EvolveOptions& opt = {}, const ModeBasis* basis = nullptr,
                          const NlsTrajectory* reference = nullptr);

}  // namespace bosestab
