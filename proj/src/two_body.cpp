#include "bosestab/two_body.hpp"

#include <algorithm>
#include <fstream>

#include "bosestab/error.hpp"
#include "bosestab/field.hpp"

namespace bosestab {

double TwoBodyTensor::exchange_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) m = std::max(m, std::abs((*this)(i, j, k, l) - (*this)(j, i, l, k)));
  return m;
}

double TwoBodyTensor::hermiticity_defect() const {
  double m = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const auto w = (*this)(i, j, k, l);
          m = std::max({m, std::abs(w - std::conj((*this)(k, l, i, j))), std::abs(w - std::conj((*this)(l, k, j, i)))});
        }
  return m;
}

double TwoBodyTensor::max_imag() const {
  double m = 0.0;
  for (const auto& z : data) m = std::max(m, std::abs(z.imag()));
  return m;
}

TwoBodyTensor two_body_elements(const ModeBasis& basis, const InteractionSpec& w, int N, double beta) {
  const Grid2D& g = basis.grid;
  const int d = basis.size();
  TwoBodyTensor W;
  W.d = d;
  W.data.assign(static_cast<size_t>(d) * d * d * d, 0.0);
  if (w.is_zero()) return W;
  require_resolved(w, N, beta, g);
  const Eigen::ArrayXd kernel = fourier_weights(w, N, beta, g);
  const long n2 = g.size();
  // Columns (i, k) hold rho_ik = conj(phi_i) phi_k; C holds w_N * rho_jl.
  Eigen::MatrixXcd R(n2, d * d), C(n2, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) R.col(i * d + k) = basis.phi.col(i).conjugate().cwiseProduct(basis.phi.col(k));
  for (int j = 0; j < d; ++j)
    for (int l = j; l < d; ++l) {
      // w is real and even, so w * conj(rho) = conj(w * rho).
      C.col(j * d + l) = convolve(g, R.col(j * d + l).array(), kernel).matrix();
      if (l != j) C.col(l * d + j) = C.col(j * d + l).conjugate();
    }
  const Eigen::MatrixXcd M = R.transpose() * C * g.cell_area();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) W(i, j, k, l) = M(i * d + k, j * d + l);
  return W;
}

TwoBodyTensor leading(const TwoBodyTensor& W, int d_small) {
  if (d_small < 1 || d_small > W.d) throw ValidationError("leading: mode count out of range");
  TwoBodyTensor out;
  out.d = d_small;
  out.data.resize(static_cast<size_t>(d_small) * d_small * d_small * d_small);
  for (int i = 0; i < d_small; ++i)
    for (int j = 0; j < d_small; ++j)
      for (int k = 0; k < d_small; ++k)
        for (int l = 0; l < d_small; ++l) out(i, j, k, l) = W(i, j, k, l);
  return out;
}

void save_two_body(const std::string& path, const TwoBodyTensor& W) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  const std::int32_t d = W.d;
  out.write("BSTWOB01", 8);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(W.data.data()), static_cast<std::streamsize>(W.data.size() * 16));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace bosestab
