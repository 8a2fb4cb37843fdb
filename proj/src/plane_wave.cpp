#include "bosestab/plane_wave.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {

double PlaneWaveOp::magnitude() const { return std::hypot(k1, k2); }

namespace {

// Signed FFT index in [-n/2, n/2) of bin m.
int signed_bin(int m, int n) { return m < n / 2 ? m : m - n; }
int bin_of(int s, int n) { return s >= 0 ? s : s + n; }

bool on_lattice(double k, double dk, int& s) {
  const double q = k / dk;
  s = static_cast<int>(std::lround(q));
  return std::abs(q - s) < 1e-9;
}

// Mode transforms with the rows that carry weight; rows whose total weight is
// below 1e-26 of the peak contribute nothing at double precision.
struct Spectra {
  Eigen::MatrixXcd F;
  std::vector<char> live;
};

Spectra spectra(const ModeBasis& basis) {
  const Grid2D& g = basis.grid;
  Spectra sp;
  sp.F.resize(g.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j) sp.F.col(j) = fft_forward(g, basis.phi.col(j).array()).matrix();
  const Eigen::VectorXd weight = sp.F.rowwise().squaredNorm();
  const double peak = weight.maxCoeff();
  sp.live.resize(g.size());
  for (long r = 0; r < g.size(); ++r) sp.live[r] = weight[r] > 1e-26 * peak;
  return sp;
}

// M_ij = <phi_i| e^{ik.x} |phi_j> for lattice k = dk (s1, s2).
Eigen::MatrixXcd shift_matrix(const ModeBasis& basis, const Spectra& sp, int s1, int s2) {
  const Grid2D& g = basis.grid;
  const int n = g.n, d = basis.size();
  std::vector<long> rows, shifted;
  for (int m1 = 0; m1 < n; ++m1) {
    const int t1 = signed_bin(m1, n) - s1;
    if (t1 < -n / 2 || t1 >= n / 2) continue;
    for (int m2 = 0; m2 < n; ++m2) {
      const int t2 = signed_bin(m2, n) - s2;
      if (t2 < -n / 2 || t2 >= n / 2) continue;
      const long r = static_cast<long>(m1) * n + m2, q = static_cast<long>(bin_of(t1, n)) * n + bin_of(t2, n);
      if (!sp.live[r] || !sp.live[q]) continue;
      rows.push_back(r);
      shifted.push_back(q);
    }
  }
  Eigen::MatrixXcd A(rows.size(), d), B(rows.size(), d);
  for (size_t r = 0; r < rows.size(); ++r) {
    A.row(r) = sp.F.row(rows[r]);
    B.row(r) = sp.F.row(shifted[r]);
  }
  // Parseval with the grid-origin phase: continuum transforms carry (-1)^m,
  // which leaves (-1)^(s1 + s2) on the product.
  const double sign = ((s1 + s2) % 2 == 0) ? 1.0 : -1.0;
  return sign * (A.adjoint() * B) * g.cell_area() / static_cast<double>(g.size());
}

}  // namespace

Eigen::MatrixXcd plane_wave_matrix(const ModeBasis& basis, const PlaneWaveOp& op) {
  const Grid2D& g = basis.grid;
  const double dk = g.momentum_spacing();
  int s1 = 0, s2 = 0;
  Eigen::MatrixXcd M;
  if (on_lattice(op.k1, dk, s1) && on_lattice(op.k2, dk, s2)) {
    M = shift_matrix(basis, spectra(basis), s1, s2);
  } else {
    if (op.magnitude() > 0.5 * M_PI / g.spacing()) {
      throw ValidationError("plane_wave_matrix: off-lattice |k| above half the grid cutoff");
    }
    const auto& a = axes(g);
    const Eigen::ArrayXcd e = (cplx(0.0, 1.0) * (op.k1 * a.x1 + op.k2 * a.x2)).exp();
    M = basis.phi.adjoint() * (e.matrix().asDiagonal() * basis.phi) * g.cell_area();
  }
  // M(-k) = M(k)^+.
  if (op.parity == PlaneWaveParity::cos) return 0.5 * (M + M.adjoint());
  return (M - M.adjoint()) / cplx(0.0, 2.0);
}

double plane_wave_norm(const ModeBasis& basis, const PlaneWaveOp& op) {
  if (!basis.A.is_zero()) throw ValidationError("plane_wave_norm: requires A = 0");
  const Eigen::MatrixXcd M = plane_wave_matrix(basis, op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

PlaneWaveSweep plane_wave_sweep(const ModeBasis& basis, double k_min, double k_max, int points) {
  if (!(k_min > 0.0) || !(k_max >= k_min) || points < 1) throw ValidationError("plane_wave_sweep: bad range");
  const double dk = basis.grid.momentum_spacing();
  const int s_lo = static_cast<int>(std::ceil(k_min / dk - 1e-9)), s_hi = static_cast<int>(std::floor(k_max / dk + 1e-9));
  if (s_hi < s_lo) throw ValidationError("plane_wave_sweep: no lattice momentum in range");
  PlaneWaveSweep sw;
  sw.lambda = basis.cutoff;
  sw.d = basis.size();
  const int count = std::min(points, s_hi - s_lo + 1);
  std::vector<int> ss;
  for (int i = 0; i < count; ++i) {
    const int s = count == 1 ? s_lo : s_lo + static_cast<int>(std::lround(double(i) * (s_hi - s_lo) / (count - 1)));
    if (ss.empty() || ss.back() != s) ss.push_back(s);
  }
  const Spectra sp = spectra(basis);
  for (int s : ss) {
    PlaneWaveSample p;
    p.k = s * dk;
    const Eigen::MatrixXcd M = shift_matrix(basis, sp, s, 0);
    const Eigen::MatrixXcd C = 0.5 * (M + M.adjoint()), S = (M - M.adjoint()) / cplx(0.0, 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ec(C, Eigen::EigenvaluesOnly), es(S, Eigen::EigenvaluesOnly);
    p.cos_norm = ec.eigenvalues().cwiseAbs().maxCoeff();
    p.sin_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    sw.samples.push_back(p);
  }
  const double root = std::sqrt(sw.lambda);
  for (const auto& p : sw.samples) {
    const double top = std::max(p.cos_norm, p.sin_norm);
    sw.max_norm = std::max(sw.max_norm, top);
    sw.fitted_C = std::max(sw.fitted_C, top * p.k / root);
  }
  sw.envelope_holds = true;
  for (const auto& p : sw.samples) {
    const double bound = std::min(1.0, sw.fitted_C * root / p.k);
    if (std::max(p.cos_norm, p.sin_norm) > bound * (1 + 1e-12) || p.cos_norm > 1.0 + 1e-12) sw.envelope_holds = false;
  }
  return sw;
}

double fourier_decomposition_check(const InteractionSpec& w, int N, double beta, const Grid2D& g, int samples,
                                   unsigned long long seed) {
  if (w.is_zero()) return 0.0;
  require_resolved(w, N, beta, g);
  const Eigen::ArrayXd what = fourier_weights(w, N, beta, g);
  const auto& a = axes(g);
  const double measure = std::pow(g.momentum_spacing() / (2.0 * M_PI), 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5 * g.L, 0.5 * g.L);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    double x1 = u(rng), x2 = u(rng), y1 = u(rng), y2 = u(rng);
    if (s == 0) y1 = x1, y2 = x2;
    const Eigen::ArrayXd kx = a.k1 * x1 + a.k2 * x2, ky = a.k1 * y1 + a.k2 * y2;
    const double rec = (what * (kx.cos() * ky.cos() + kx.sin() * ky.sin())).sum() * measure;
    worst = std::max(worst, std::abs(rec - scaled_interaction(w, N, beta, x1 - y1, x2 - y2)));
  }
  return worst;
}

}  // namespace bosestab
