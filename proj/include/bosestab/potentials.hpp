#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

#include "bosestab/grid.hpp"

namespace bosestab {

enum class PotentialKind { harmonic, power, custom };

// Trapping potential V. For harmonic and power kinds V(x) = coefficient * |x|^s
// (harmonic pins s = 2). trap_constant is the c of the growth bound
// V(x) >= |x|^s / c - c that validation checks.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::harmonic;
  double coefficient = 1.0;
  double exponent = 2.0;
  double trap_constant = 1.0;
  std::function<double(double, double)> custom;

  double operator()(double x1, double x2) const;
  static PotentialSpec harmonic(double coefficient = 1.0);
};

enum class VectorPotentialKind { zero, uniform_field, custom };

// Magnetic vector potential; the uniform kind is the symmetric gauge
// A(x) = (B/2)(-x2, x1).
struct VectorPotentialSpec {
  VectorPotentialKind kind = VectorPotentialKind::zero;
  double field_strength = 0.0;
  std::function<std::array<double, 2>(double, double)> custom;

  std::array<double, 2> operator()(double x1, double x2) const;
  bool is_zero() const { return kind == VectorPotentialKind::zero; }
  static VectorPotentialSpec uniform(double B);
};

Eigen::ArrayXd sample_potential(const Grid2D& g, const PotentialSpec& V);
void sample_vector_potential(const Grid2D& g, const VectorPotentialSpec& A, Eigen::ArrayXd& a1,
                             Eigen::ArrayXd& a2);

// Centered finite-difference curl at a point.
double curl_fd(const VectorPotentialSpec& A, double x1, double x2, double h = 1e-4);

}  // namespace bosestab
