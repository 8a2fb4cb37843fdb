#pragma once

#include <vector>

#include <Eigen/Core>

#include "bosestab/rdm.hpp"

namespace bosestab {

struct DeFinettiOptions {
  int n_atoms = 8;
  int restarts = 5;
  int iterations = 3000;  // per restart, spread over the smoothing schedule
  unsigned long long seed = 1;
};

struct DeFinettiFit {
  std::vector<Eigen::MatrixXcd> atoms;  // d x d, positive, unit trace
  std::vector<double> weights;          // >= 0, sum <= 1
  double error = 0.0;                   // (1/2) || gamma2 - sum_j lambda_j atom_j (x) atom_j ||_1
  double reference = 0.0;               // sqrt(log d / N)
  int iterations = 0;
  unsigned long long seed = 0;
  int best_restart = 0;
};

// Fits an atomic measure by descent on a smoothed trace norm (eigenvalues
// |x| -> sqrt(x^2 + mu^2) with mu driven down to 1e-9), parametrizing atoms as
// B B^+ / tr(B B^+) and projecting the weights onto {lambda >= 0, sum <= 1}.
// Starts are built from the eigenbasis of Tr_2 gamma2 (the state itself, its
// spectral projectors, and seeded mixtures diagonal in that basis), so the
// result is covariant under a common unitary rotation of the modes.
DeFinettiFit fit_definetti(const Rdm& gamma2, int N, const DeFinettiOptions& opt = {});

// (1/2) || A ||_1 of a Hermitian matrix.
double half_trace_norm(const Eigen::MatrixXcd& A);

}  // namespace bosestab
