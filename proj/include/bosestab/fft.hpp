#pragma once

#include <Eigen/Core>

#include "bosestab/grid.hpp"

namespace bosestab {

// Unnormalized forward transform F_m = sum_j f_j exp(-2 pi i j.m / n) over the
// flat grid index.
Eigen::ArrayXcd fft_forward(const Grid2D& g, const Eigen::ArrayXcd& f);
// Inverse of fft_forward (carries the 1/n^2).
Eigen::ArrayXcd fft_inverse(const Grid2D& g, const Eigen::ArrayXcd& F);

}  // namespace bosestab
