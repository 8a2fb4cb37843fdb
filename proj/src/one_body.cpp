#include "bosestab/one_body.hpp"

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {

OneBodyOperator::OneBodyOperator(const Grid2D& g, const PotentialSpec& V, const VectorPotentialSpec& A)
    : grid_(g), V_(sample_potential(g, V)), magnetic_(!A.is_zero()) {
  if (magnetic_) sample_vector_potential(g, A, A1_, A2_);
  if (!V_.isFinite().all()) throw ValidationError("potential is not finite on the grid");
}

Eigen::ArrayXcd OneBodyOperator::apply(const Eigen::ArrayXcd& u) const {
  if (u.size() != grid_.size()) throw ValidationError("one-body operator: grid mismatch");
  const auto& a = axes(grid_);
  if (!magnetic_) return minus_laplacian(grid_, u) + V_ * u;

  const Eigen::ArrayXcd U = fft_forward(grid_, u);
  const Eigen::ArrayXcd p1 = fft_inverse(grid_, U * a.k1) + A1_ * u;
  const Eigen::ArrayXcd p2 = fft_inverse(grid_, U * a.k2) + A2_ * u;
  const Eigen::ArrayXcd q1 = fft_inverse(grid_, fft_forward(grid_, p1) * a.k1) + A1_ * p1;
  const Eigen::ArrayXcd q2 = fft_inverse(grid_, fft_forward(grid_, p2) * a.k2) + A2_ * p2;
  return q1 + q2 + V_ * u;
}

Field OneBodyOperator::apply(const Field& u) const {
  if (!(u.grid == grid_)) throw ValidationError("one-body operator: field grid does not match potential samples");
  return Field(grid_, apply(u.values));
}

double OneBodyOperator::expectation(const Field& u) const {
  return (u.values.conjugate() * apply(u.values)).sum().real() * grid_.cell_area();
}

double OneBodyOperator::kinetic(const Field& u) const {
  return expectation(u) - (V_ * u.values.abs2()).sum() * grid_.cell_area();
}

Field apply_one_body(const Field& u, const PotentialSpec& V, const VectorPotentialSpec& A) {
  return OneBodyOperator(u.grid, V, A).apply(u);
}

}  // namespace bosestab
