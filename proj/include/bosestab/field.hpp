#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "bosestab/grid.hpp"

namespace bosestab {

using cplx = std::complex<double>;

// Complex-valued function sampled on a Grid2D.
struct Field {
  Grid2D grid;
  Eigen::ArrayXcd values;

  Field() = default;
  explicit Field(const Grid2D& g) : grid(g), values(Eigen::ArrayXcd::Zero(g.size())) {}
  Field(const Grid2D& g, Eigen::ArrayXcd v);

  Field& operator*=(cplx s) {
    values *= s;
    return *this;
  }
};

Field sample(const Grid2D& g, const std::function<cplx(double, double)>& fn);
// pi^{-1/2} exp(-|x - center|^2 / 2): unit-norm ground state of -Delta + |x|^2.
Field oscillator_gaussian(const Grid2D& g, double center1 = 0.0, double center2 = 0.0);

double integrate(const Grid2D& g, const Eigen::ArrayXd& f);
cplx integrate(const Grid2D& g, const Eigen::ArrayXcd& f);
// <f, g> = int conj(f) g.
cplx inner(const Field& f, const Field& g);
double norm(const Field& f);
double norm_squared(const Field& f);
Field normalized(const Field& f);
bool all_finite(const Field& f);

// Spectral derivatives on the periodic box.
Eigen::ArrayXcd minus_laplacian(const Grid2D& g, const Eigen::ArrayXcd& f);
void gradient(const Grid2D& g, const Eigen::ArrayXcd& f, Eigen::ArrayXcd& d1, Eigen::ArrayXcd& d2);
// int |grad f|^2, evaluated in momentum space.
double gradient_norm_squared(const Field& f);
// (2 pi)^{-2} sum_k |f^(k)|^2 (Delta k)^2 with f^(k) = int f e^{-ik.x}.
double momentum_norm_squared(const Field& f);
// (w * rho)(x) for a kernel given by its transform sampled on the momentum
// lattice (fft_forward ordering).
Eigen::ArrayXcd convolve(const Grid2D& g, const Eigen::ArrayXcd& rho, const Eigen::ArrayXd& kernel_hat);

// Binary layout: "BSFIELD1", u32 n, f64 L, u32 kind length, kind bytes,
// then n*n (re, im) f64 pairs in row-major order; all little-endian.
void save_field(const std::string& path, const Field& f, const std::string& kind);
Field load_field(const std::string& path, std::string* kind = nullptr);

}  // namespace bosestab
