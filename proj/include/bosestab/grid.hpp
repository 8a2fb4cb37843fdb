#pragma once

#include <Eigen/Core>

namespace bosestab {

// Periodic square box [-L, L)^2 sampled at n x n points. Flat index is
// i1 * n + i2 where i1 runs along x1.
struct Grid2D {
  int n = 128;
  double L = 8.0;

  double spacing() const { return 2.0 * L / n; }
  double cell_area() const { return spacing() * spacing(); }
  double momentum_spacing() const;  // pi / L
  long size() const { return static_cast<long>(n) * n; }

  double coordinate(int i) const { return -L + i * spacing(); }
  // Momentum of FFT bin m in {0..n-1}, i.e. (pi/L) * {0..n/2-1, -n/2..-1}.
  double momentum(int m) const;

  bool operator==(const Grid2D& o) const { return n == o.n && L == o.L; }
};

// Throws ValidationError unless n is even, n >= 8 and L > 0.
Grid2D make_grid(int n, double L);

// Coordinates and momenta laid out over the flat grid index.
struct GridAxes {
  Eigen::ArrayXd x1, x2;
  Eigen::ArrayXd k1, k2;
  Eigen::ArrayXd k_squared;
};

const GridAxes& axes(const Grid2D& g);

}  // namespace bosestab
