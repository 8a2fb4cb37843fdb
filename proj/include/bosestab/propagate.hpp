#pragma once

#include <string>
#include <vector>

#include "bosestab/nls.hpp"

namespace bosestab {

struct NlsTrajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<double> norms;
  std::vector<double> energies;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
  bool energy_warning = false;
  std::string status;  // "ok" or "energy-drift"
};

struct PropagateOptions {
  int record_every = 1;               // store every k-th step (always the last)
  double energy_drift_warning = 1e-6; // relative to max(1, |E(0)|)
};

// Strang split-step: half kinetic, full potential + mean-field phase, half
// kinetic. Requires A = 0 and ||u0|| = 1.
NlsTrajectory propagate_nls(const Field& u0, const NlsProblem& problem, double T, double dt,
                            const PropagateOptions& opt = {});

}  // namespace bosestab
