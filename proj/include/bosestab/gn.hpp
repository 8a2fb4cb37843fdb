#pragma once

#include <string>
#include <vector>

#include "bosestab/field.hpp"

namespace bosestab {

// 2 (int |u|^2)(int |grad u|^2) / int |u|^4. Invariant under u -> c u(lambda x).
double gn_quotient(const Field& u);

enum class GnMethod { grid_quotient, radial_shooting };
std::string to_string(GnMethod m);

struct GnResult {
  double a_star = 0.0;
  Field Q;  // optimizer profile, amplitude-normalized to solve -Delta Q + Q = Q^3
  GnMethod method = GnMethod::grid_quotient;
  double residual = 0.0;
  int iterations = 0;
};

// Positive radial solution of -Q'' - Q'/r + Q = Q^3, Q'(0) = 0, Q(inf) = 0.
struct TownesProfile {
  double center_value = 0.0;  // Q(0)
  double a_star = 0.0;        // 2 pi int_0^r_max Q^2 r dr
  std::vector<double> r, q;   // accepted integrator nodes
  double bracket_width = 0.0;
  double at(double radius) const;  // linear interpolation, 0 beyond r_max
};

struct ShootingOptions {
  double q_low = 2.0, q_high = 2.5;
  double r_start = 1e-6;
  double r_max = 12.0;
  double tolerance = 1e-12;  // integrator abs/rel tolerance
};

// Bisection on Q(0): overshoot (Q crosses zero) vs undershoot (Q turns up).
// Throws ValidationError when the bracket does not straddle the soliton.
TownesProfile shoot_townes(const ShootingOptions& opt = {});

// tol is the relative gradient-residual target of the grid method.
GnResult compute_a_star(const Grid2D& g, double tol, GnMethod method);

struct GnComparison {
  GnResult grid;
  GnResult shooting;
  double relative_gap = 0.0;
};
GnComparison compare_a_star(const Grid2D& g, double tol);

}  // namespace bosestab
