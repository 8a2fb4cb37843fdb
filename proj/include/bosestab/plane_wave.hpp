#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bosestab/interaction.hpp"
#include "bosestab/modes.hpp"

namespace bosestab {

enum class PlaneWaveParity { cos, sin };

// Multiplication by cos(k.x) or sin(k.x).
struct PlaneWaveOp {
  double k1 = 0.0, k2 = 0.0;
  PlaneWaveParity parity = PlaneWaveParity::cos;
  double magnitude() const;
};

// d x d matrix <phi_i| b_k |phi_j>. Momenta on the box lattice (pi/L) Z^2 are
// handled exactly in momentum space without wrap-around, so |k| may exceed the
// grid cutoff (the band-limited modes then give 0). Other k use grid
// quadrature and must stay below half the grid cutoff.
Eigen::MatrixXcd plane_wave_matrix(const ModeBasis& basis, const PlaneWaveOp& op);
// Operator norm of the compressed multiplier. Requires A = 0.
double plane_wave_norm(const ModeBasis& basis, const PlaneWaveOp& op);

struct PlaneWaveSample {
  double k = 0.0;
  double cos_norm = 0.0;
  double sin_norm = 0.0;
};

struct PlaneWaveSweep {
  double lambda = 0.0;
  int d = 0;
  std::vector<PlaneWaveSample> samples;
  double fitted_C = 0.0;   // max over samples of norm |k| / sqrt(Lambda)
  double max_norm = 0.0;
  bool envelope_holds = false;  // norm <= min(1, C sqrt(Lambda) / |k|) everywhere
};

// Lattice momenta along x1 with |k| in [k_min, k_max]; at most `points`
// values, evenly spread over the lattice.
PlaneWaveSweep plane_wave_sweep(const ModeBasis& basis, double k_min, double k_max, int points = 24);

// Reconstructs N^{2 beta} w(N^beta (x - y)) at `samples` random pairs from the
// lattice Fourier sum (2 pi)^{-2} sum_k w^(N^-beta k) [cos kx cos ky + sin kx sin ky] dk^2
// and returns the largest absolute error against the direct evaluation.
double fourier_decomposition_check(const InteractionSpec& w, int N, double beta, const Grid2D& g, int samples,
                                   unsigned long long seed = 1);

}  // namespace bosestab
