#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bosestab/field.hpp"
#include "bosestab/potentials.hpp"

namespace bosestab {

// How many modes to keep: either a count d or an energy cutoff Lambda
// (d = #{eps_i <= Lambda}). Exactly one must be set.
struct ModeSelection {
  int count = 0;
  double cutoff = std::numeric_limits<double>::quiet_NaN();
  int max_modes = 256;
  double tolerance = 1e-9;  // eigen-residual target per mode

  static ModeSelection modes(int d) { return {d}; }
  static ModeSelection up_to(double lambda) {
    ModeSelection s;
    s.cutoff = lambda;
    return s;
  }
};

// Lowest eigenpairs of the discretized one-body operator h, ascending.
// Columns of `phi` are the modes sampled on the grid, orthonormal in the grid
// inner product. Each mode's largest-magnitude sample is real and positive.
struct ModeBasis {
  Grid2D grid;
  PotentialSpec V;
  VectorPotentialSpec A;
  Eigen::MatrixXcd phi;               // grid.size() x d
  Eigen::VectorXd energies;           // eps_1 <= ... <= eps_d
  double cutoff = 0.0;                // Lambda; eps_d unless a cutoff was requested
  bool cutoff_adjusted = false;       // requested Lambda widened to a whole level
  bool splits_level = false;          // d cuts through a degenerate level
  double max_residual = 0.0;          // max_i ||h phi_i - eps_i phi_i||
  std::string method;                 // "separable" or "lobpcg"
  std::string gauge = "max-component-real-positive";

  int size() const { return static_cast<int>(energies.size()); }
  Field mode(int i) const;
  // Leading d' modes of this basis (d' <= d), sharing grid and operator.
  ModeBasis leading(int d_small) const;
  // Expansion coefficients c_i = <phi_i|u>.
  Eigen::VectorXcd coefficients(const Field& u) const;
  // d x d Gram matrix in the grid inner product.
  Eigen::MatrixXcd gram() const;
};

// Relative spacing below which two eigenvalues count as one level.
inline constexpr double kDegeneracyTolerance = 1e-7;

ModeBasis build_mode_basis(const PotentialSpec& V, const VectorPotentialSpec& A, const Grid2D& g,
                           const ModeSelection& sel);

// Analytic Fock-Darwin spectrum of (-i grad + A)^2 + |x|^2 with a uniform field
// B in the symmetric gauge: 2 sqrt(1 + B^2/4)(2n + |m| + 1) + B m, lowest
// `count` values ascending.
std::vector<double> fock_darwin_levels(double B, int count);

// Rotation by pi on the grid (x -> -x), applied to the modes: the d x d matrix
// <phi_i| R |phi_j>.
Eigen::MatrixXcd rotation_by_pi(const ModeBasis& basis);

}  // namespace bosestab
