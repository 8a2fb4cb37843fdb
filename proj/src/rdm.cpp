#include "bosestab/rdm.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bosestab/error.hpp"
#include "bosestab/hamiltonian.hpp"

namespace bosestab {

double Rdm::hermiticity_defect() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }

double Rdm::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (matrix + matrix.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

namespace {

// A(s, c) = (a_c psi)_s for every removal channel c.
Eigen::MatrixXcd removed(const Eigen::VectorXcd& psi, const RemovalTable& t) {
  Eigen::MatrixXcd A(t.lower_size, t.channels);
  for (long s = 0; s < t.lower_size; ++s)
    for (int c = 0; c < t.channels; ++c) {
      const size_t at = static_cast<size_t>(s) * t.channels + c;
      A(s, c) = t.coef[at] * psi[t.source[at]];
    }
  return A;
}

}  // namespace

Rdm one_body_rdm(const Eigen::VectorXcd& psi, const FockBasis& fock) {
  if (psi.size() != fock.size()) throw ValidationError("rdm: state length differs from the Fock dimension");
  const Eigen::MatrixXcd A = removed(psi, single_removal(fock));
  Rdm g;
  g.k = 1;
  g.d = fock.modes();
  // G(j, i) = <a_j psi|a_i psi>, gamma_ij = G(j, i) / N.
  g.matrix = (A.adjoint() * A).transpose() / static_cast<double>(fock.particles());
  return g;
}

Rdm two_body_rdm(const Eigen::VectorXcd& psi, const FockBasis& fock) {
  if (psi.size() != fock.size()) throw ValidationError("rdm: state length differs from the Fock dimension");
  const int N = fock.particles(), d = fock.modes();
  if (N < 2) throw ValidationError("rdm: k = 2 needs N >= 2");
  const Eigen::MatrixXcd A = removed(psi, pair_removal(fock));
  const Eigen::MatrixXcd G = A.adjoint() * A / (static_cast<double>(N) * (N - 1));
  Rdm g;
  g.k = 2;
  g.d = d;
  g.matrix.resize(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) g.matrix(i * d + j, k * d + l) = G(pair_index(k, l, d), pair_index(i, j, d));
  return g;
}

Rdm rdm(const ManyBodyResult& result, const FockBasis& fock, int k) {
  if (k == 1) return one_body_rdm(result.psi, fock);
  if (k == 2) return two_body_rdm(result.psi, fock);
  throw ValidationError("rdm: k must be 1 or 2");
}

Rdm partial_trace(const Rdm& g2) {
  if (g2.k != 2) throw ValidationError("partial_trace: needs a two-body RDM");
  const int d = g2.d;
  Rdm g;
  g.k = 1;
  g.d = d;
  g.matrix = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) g.matrix(i, k) += g2.matrix(i * d + j, k * d + j);
  return g;
}

double energy_identity_check(const ManyBodyResult& result, const Rdm& g2, const ModeBasis& basis,
                             const TwoBodyTensor& W) {
  if (result.eps != 0.0) throw ValidationError("energy_identity_check: needs an eps = 0 result");
  if (g2.k != 2 || g2.d != basis.size() || W.d != basis.size()) {
    throw ValidationError("energy_identity_check: dimension mismatch");
  }
  const Eigen::MatrixXcd H2 = two_body_hamiltonian(basis.energies, W);
  const double half_trace = 0.5 * (H2 * g2.matrix).trace().real();
  return std::abs(result.e_N - half_trace);
}

double energy_identity_check(const ManyBodyResult& result, const Rdm& g2, const ModeBasis& basis,
                             const InteractionSpec& w, int N, double beta) {
  return energy_identity_check(result, g2, basis, two_body_elements(basis, w, N, beta));
}

CondensateOverlap condensate_overlap(const Rdm& gamma1, const Field& u, const ModeBasis& basis) {
  if (gamma1.k != 1 || gamma1.d != basis.size()) throw ValidationError("condensate_overlap: dimension mismatch");
  if (std::abs(norm(u) - 1.0) > 1e-8) throw ValidationError("condensate_overlap: u must be normalized");
  const Eigen::VectorXcd c = basis.coefficients(u);
  CondensateOverlap o;
  o.value = c.dot(gamma1.matrix * c).real();
  o.defect = std::max(0.0, 1.0 - c.squaredNorm());
  o.flagged = o.defect > 0.05;
  return o;
}

double trace_distance_to_pure(const Eigen::MatrixXcd& gamma1, const Eigen::VectorXcd& c) {
  const long d = gamma1.rows();
  Eigen::VectorXcd v(d + 1);
  v.head(d) = c;
  v[d] = std::sqrt(std::max(0.0, 1.0 - c.squaredNorm()));
  Eigen::MatrixXcd D = -v * v.adjoint();
  D.topLeftCorner(d, d) += gamma1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (D + D.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace bosestab
