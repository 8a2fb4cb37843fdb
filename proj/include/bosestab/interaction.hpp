#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "bosestab/grid.hpp"

namespace bosestab {

enum class InteractionForm { gaussian, compact_bump, custom };

// Unscaled pair potential w. Conventions:
//   gaussian:     w(x) = -g exp(-|x|^2 / (2 sigma^2)) + g_rep exp(-|x|^2 / (2 sigma_rep^2))
//   compact_bump: w(x) = -g exp(1 - 1 / (1 - |x|^2 / sigma^2)) for |x| < sigma, else 0
//   custom:       user sampler, assumed to vanish outside [-range, range]^2
// Fourier transform: w^(k) = int w(x) exp(-i k.x) dx.
struct InteractionSpec {
  InteractionForm form = InteractionForm::gaussian;
  double strength = 0.0;  // g >= 0, attractive amplitude
  double range = 1.0;     // sigma > 0
  double repulsive_strength = 0.0;
  double repulsive_range = 1.0;
  std::function<double(double, double)> custom;

  static InteractionSpec gaussian(double g, double sigma = 1.0);
  static InteractionSpec none() { return gaussian(0.0); }

  double operator()(double x1, double x2) const;
  double fourier(double k1, double k2) const;

  double integral() const;            // b = int w
  double negative_mass() const;       // m- = int |w_-|
  double l1_norm() const;             // int |w|
  double l2_norm_squared() const;     // int w^2
  // Smallest length scale of the profile; the scaled profile has range * N^-beta.
  double min_length_scale() const;
  bool is_zero() const;
};

// N^{2 beta} w(N^beta x).
double scaled_interaction(const InteractionSpec& w, int N, double beta, double x1, double x2);

// Samples of w^(N^-beta k) on the momentum lattice of g (fft_forward ordering).
// With this normalization (2 pi)^-2 sum_k w^(N^-beta k) e^{ik.(x-y)} (Delta k)^2
// reproduces N^{2 beta} w(N^beta (x - y)).
Eigen::ArrayXd fourier_weights(const InteractionSpec& w, int N, double beta, const Grid2D& g);

// Throws ValidationError("under-resolved interaction ...") when the scaled
// range falls below two grid spacings. Always accepts w == 0.
void require_resolved(const InteractionSpec& w, int N, double beta, const Grid2D& g);
bool is_resolved(const InteractionSpec& w, int N, double beta, const Grid2D& g);

// Grid quadrature of the scaled interaction centred at the origin.
double scaled_integral_on_grid(const InteractionSpec& w, int N, double beta, const Grid2D& g);

std::string to_string(InteractionForm f);

}  // namespace bosestab
