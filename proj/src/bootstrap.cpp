#include "bosestab/bootstrap.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "bosestab/error.hpp"

namespace bosestab {

double bootstrap_first_exponent(double alpha, double a) { return alpha + a - 0.5; }

double bootstrap_second_exponent(double alpha, double a, double b) {
  return alpha + 2.0 * b * alpha + 0.5 * a * b - 0.25 * a;
}

namespace {

void validate(const BootstrapRanges& r) {
  if (!(0.0 < r.a_min && r.a_min <= r.a_max && r.a_max < 0.5 && 0.0 < r.b_min && r.b_min <= r.b_max &&
        r.b_max < 0.5)) {
    throw ValidationError("bootstrap: exponent ranges must lie inside (0, 1/2)");
  }
}

}  // namespace

BootstrapState bootstrap_step_at(const BootstrapState& s, double a, double b) {
  if (!(s.alpha >= 0.0)) throw ValidationError("bootstrap: alpha must be nonnegative");
  BootstrapState n = s;
  n.a_exp = a;
  n.b_exp = b;
  n.delta = 0.5 + b;
  n.lambda_exp = s.alpha + a;
  const double f1 = bootstrap_first_exponent(s.alpha, a), f2 = bootstrap_second_exponent(s.alpha, a, b);
  n.alpha = std::max(0.0, std::max(f1, f2));
  n.log_factor = n.alpha > 0.0 && f1 >= f2 - 1e-14;
  n.gain = s.alpha - n.alpha;
  n.trajectory.push_back(n.alpha);
  return n;
}

BootstrapState bootstrap_step(const BootstrapState& s, const BootstrapRanges& r) {
  validate(r);
  if (s.alpha == 0.0) return bootstrap_step_at(s, r.a_min, r.b_min);
  // The second exponent grows with b, so b sits at its lower end; in a the
  // first increases and the second decreases, so the optimum is their
  // crossing, clamped to the box.
  const double b = r.b_min;
  const double a = std::clamp((0.5 + 2.0 * b * s.alpha) / (1.25 - 0.5 * b), r.a_min, r.a_max);
  return bootstrap_step_at(s, a, b);
}

BootstrapRun run_bootstrap(double beta, double eps0, const BootstrapRanges& r, int max_steps) {
  if (!(beta > 0.0)) throw ValidationError("bootstrap: beta must be positive");
  if (beta >= 1.0) {
    throw ValidationError("bootstrap: second-moment estimate unavailable (the moment bounds need beta < 1)");
  }
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw ValidationError("bootstrap: eps0 must lie in (0, 1)");
  BootstrapRun run;
  run.beta = beta;
  run.eps0 = eps0;
  run.moment_estimate_valid = true;
  BootstrapState s;
  s.alpha = 2.0 * beta;
  s.beta = beta;
  s.eps0 = eps0;
  s.trajectory = {s.alpha};
  run.alphas.push_back(s.alpha);
  while (s.alpha > 0.0) {
    if (run.step_count >= max_steps) throw ValidationError("bootstrap: step limit reached before alpha = 0");
    s = bootstrap_step(s, r);
    if (!(s.gain > 0.0)) throw ValidationError("bootstrap: non-positive gain");
    run.steps.push_back(s);
    run.alphas.push_back(s.alpha);
    ++run.step_count;
  }
  return run;
}

}  // namespace bosestab
