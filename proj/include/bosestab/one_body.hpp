#pragma once

#include <Eigen/Core>

#include "bosestab/field.hpp"
#include "bosestab/potentials.hpp"

namespace bosestab {

// h = (-i grad + A)^2 + V discretized spectrally. The magnetic part is applied
// as sum_j Pi_j Pi_j with Pi_j = -i D_j + A_j, which keeps the discrete
// operator exactly Hermitian for grid quadrature.
class OneBodyOperator {
 public:
  OneBodyOperator(const Grid2D& g, const PotentialSpec& V, const VectorPotentialSpec& A);

  const Grid2D& grid() const { return grid_; }
  const Eigen::ArrayXd& potential() const { return V_; }
  bool magnetic() const { return magnetic_; }

  Eigen::ArrayXcd apply(const Eigen::ArrayXcd& u) const;
  Field apply(const Field& u) const;
  // <u|h|u> (real part; the imaginary part vanishes up to rounding).
  double expectation(const Field& u) const;
  // <u|(-i grad + A)^2|u> without V.
  double kinetic(const Field& u) const;

 private:
  Grid2D grid_;
  Eigen::ArrayXd V_;
  Eigen::ArrayXd A1_, A2_;
  bool magnetic_ = false;
};

Field apply_one_body(const Field& u, const PotentialSpec& V, const VectorPotentialSpec& A);

}  // namespace bosestab
