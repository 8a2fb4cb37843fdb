#pragma once

#include <string>

#include <Eigen/Core>

#include "bosestab/hamiltonian.hpp"

namespace bosestab {

struct LanczosOptions {
  double tolerance = 1e-10;  // on ||H psi - E psi||
  unsigned long long seed = 1;
  int krylov = 80;           // basis size per restart
  int max_restarts = 400;
};

struct ManyBodyResult {
  int N = 0;
  double eps = 0.0;
  double E = 0.0;        // Rayleigh quotient of psi
  double e_N = 0.0;      // E / N
  Eigen::VectorXcd psi;  // unit norm; largest component real positive
  double residual = 0.0;
  unsigned long long seed = 0;
  bool converged = false;
  bool degenerate = false;  // second Ritz value within 1e-8
  double gap = 0.0;         // second minus first Ritz value of the last Krylov space
  int matvecs = 0;
  std::string flag;         // "", "not-converged" or "degenerate"
};

// Restarted Lanczos with full reorthogonalization from a seeded random start.
ManyBodyResult ground_state(const FockHamiltonian& H, const LanczosOptions& opt = {});

}  // namespace bosestab
