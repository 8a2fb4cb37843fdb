#pragma once

#include <vector>

namespace bosestab {

// Admissible box for the cutoff exponents: Lambda = N^{alpha + a}, delta = 1/2 + b.
struct BootstrapRanges {
  double a_min = 1e-3, a_max = 0.5 - 1e-3;
  double b_min = 1e-3, b_max = 0.5 - 1e-3;
};

struct BootstrapState {
  double alpha = 0.0;        // current exponent in |e_{N,eps}| <= C N^alpha
  double a_exp = 0.0;        // optimizing offsets of the last step
  double b_exp = 0.0;
  double delta = 0.5;        // 1/2 + b_exp
  double lambda_exp = 0.0;   // alpha + a_exp, before the update
  double gain = 0.0;         // alpha_before - alpha
  bool log_factor = false;   // the winning exponent carries a log N factor
  double beta = 0.5;
  double eps0 = 0.5;
  std::vector<double> trajectory;  // alpha values, starting point included
};

// The two exponents from a step with offsets (a, b).
double bootstrap_first_exponent(double alpha, double a);
double bootstrap_second_exponent(double alpha, double a, double b);

// One recursion step with (a, b) minimizing the larger exponent over the box.
BootstrapState bootstrap_step(const BootstrapState& s, const BootstrapRanges& r = {});
// Same with prescribed offsets.
BootstrapState bootstrap_step_at(const BootstrapState& s, double a, double b);

struct BootstrapRun {
  double beta = 0.0;
  double eps0 = 0.0;
  bool moment_estimate_valid = false;  // beta < 1, required for every step
  std::vector<BootstrapState> steps;   // state after each step
  std::vector<double> alphas;          // 2 beta, ..., 0
  int step_count = 0;
};

// Iterates from alpha = 2 beta down to 0. Rejects beta >= 1.
BootstrapRun run_bootstrap(double beta, double eps0, const BootstrapRanges& r = {}, int max_steps = 100000);

}  // namespace bosestab
