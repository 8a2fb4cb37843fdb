#include "bosestab/hamiltonian.hpp"

#include <cmath>

#include "bosestab/error.hpp"

namespace bosestab {

namespace {

bool tensor_is_zero(const TwoBodyTensor& W) {
  for (const auto& z : W.data)
    if (z != 0.0) return false;
  return true;
}

}  // namespace

FockHamiltonian::FockHamiltonian(const FockBasis& fock, const Eigen::VectorXd& mode_energies,
                                 const TwoBodyTensor& W, double eps)
    : fock_(fock), energies_(mode_energies), W_(W), eps_(eps) {
  const int N = fock.particles(), d = fock.modes();
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("assemble_hamiltonian: eps must lie in [0, 1)");
  if (mode_energies.size() != d || W.d != d) throw ValidationError("assemble_hamiltonian: mode count mismatch");
  interacting_ = !tensor_is_zero(W);
  if (interacting_ && N < 2) {
    throw ValidationError("assemble_hamiltonian: N < 2 with nonzero interaction (the 1/(N-1) prefactor is undefined)");
  }
  diagonal_.resize(fock.size());
  for (long s = 0; s < fock.size(); ++s) {
    double e = 0.0;
    for (int i = 0; i < d; ++i) e += fock.occupation(s, i) * mode_energies[i];
    diagonal_[s] = (1.0 - eps) * e;
  }
  if (!interacting_) return;
  pairs_ = pair_removal(fock);
  const int np = pairs_.channels;
  V_ = Eigen::MatrixXcd::Zero(np, np);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) V_(pair_index(i, j, d), pair_index(k, l, d)) += W(i, j, k, l);
  V_ /= 2.0 * (N - 1);
}

void FockHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out = diagonal_.cwiseProduct(in);
  if (!interacting_) return;
  const long lower = pairs_.lower_size;
  const int np = pairs_.channels;
  // M(s, q) = (A_q psi)_s, then Y = M V^T and out += sum_p A_p^+ Y(:, p).
  Eigen::MatrixXcd M(lower, np);
  for (long s = 0; s < lower; ++s)
    for (int q = 0; q < np; ++q) {
      const size_t at = static_cast<size_t>(s) * np + q;
      M(s, q) = pairs_.coef[at] * in[pairs_.source[at]];
    }
  const Eigen::MatrixXcd Y = M * V_.transpose();
  for (long s = 0; s < lower; ++s)
    for (int p = 0; p < np; ++p) {
      const size_t at = static_cast<size_t>(s) * np + p;
      out[pairs_.source[at]] += pairs_.coef[at] * Y(s, p);
    }
}

Eigen::VectorXcd FockHamiltonian::apply(const Eigen::VectorXcd& in) const {
  Eigen::VectorXcd out;
  apply(in, out);
  return out;
}

double FockHamiltonian::expectation(const Eigen::VectorXcd& psi) const { return psi.dot(apply(psi)).real(); }

Eigen::MatrixXcd FockHamiltonian::dense() const {
  const long n = dim();
  Eigen::MatrixXcd H(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n), col;
  for (long j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e, col);
    H.col(j) = col;
    e[j] = 0.0;
  }
  return H;
}

FockHamiltonian FockHamiltonian::with_eps(double eps) const { return FockHamiltonian(fock_, energies_, W_, eps); }

Eigen::MatrixXcd two_body_hamiltonian(const Eigen::VectorXd& e, const TwoBodyTensor& W) {
  const int d = W.d;
  Eigen::MatrixXcd H(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) H(i * d + j, k * d + l) = W(i, j, k, l);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) H(i * d + j, i * d + j) += e[i] + e[j];
  return H;
}

Eigen::VectorXcd product_state(const Eigen::VectorXcd& c, const FockBasis& fock) {
  const int N = fock.particles(), d = fock.modes();
  if (c.size() != d) throw ValidationError("product_state: coefficient length differs from d");
  if (std::abs(c.norm() - 1.0) > 1e-10) throw ValidationError("product_state: coefficients not normalized");
  Eigen::VectorXcd psi(fock.size());
  const double logNf = std::lgamma(N + 1.0);
  for (long s = 0; s < fock.size(); ++s) {
    std::complex<double> amp = 1.0;
    double logw = logNf;
    for (int i = 0; i < d; ++i) {
      const int n = fock.occupation(s, i);
      if (n == 0) continue;
      amp *= std::pow(c[i], n);
      logw -= std::lgamma(n + 1.0);
    }
    psi[s] = amp * std::exp(0.5 * logw);
  }
  return psi;
}

namespace {

// Gradient of (1/2)<cc|W|cc> with respect to conj(c): sum_jkl W_ijkl conj(c_j) c_k c_l.
Eigen::VectorXcd interaction_gradient(const Eigen::VectorXcd& c, const TwoBodyTensor& W) {
  const int d = W.d;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) g[i] += W(i, j, k, l) * std::conj(c[j]) * c[k] * c[l];
  return g;
}

}  // namespace

double condensate_energy(const Eigen::VectorXcd& c, const Eigen::VectorXd& e, const TwoBodyTensor& W) {
  double one = 0.0;
  for (int i = 0; i < W.d; ++i) one += e[i] * std::norm(c[i]);
  return one + 0.5 * c.dot(interaction_gradient(c, W)).real();
}

CondensateOptimum best_condensate(const Eigen::VectorXd& e, const TwoBodyTensor& W, double tol) {
  const int d = W.d;
  CondensateOptimum best;
  best.c = Eigen::VectorXcd::Zero(d);
  best.c[0] = 1.0;
  best.energy = condensate_energy(best.c, e, W);
  double tau = 1.0 / (e.maxCoeff() + 1.0);
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXcd g = e.cwiseProduct(best.c) + interaction_gradient(best.c, W);
    g -= best.c.dot(g) * best.c;
    best.iterations = it;
    if (g.norm() <= tol) break;
    bool moved = false;
    while (tau > 1e-14) {
      const Eigen::VectorXcd trial = (best.c - tau * g).normalized();
      const double Et = condensate_energy(trial, e, W);
      if (Et <= best.energy + 1e-15) {
        moved = Et < best.energy;
        best.c = trial;
        best.energy = Et;
        tau *= 1.5;
        break;
      }
      tau *= 0.5;
    }
    if (!moved) break;
  }
  return best;
}

}  // namespace bosestab
