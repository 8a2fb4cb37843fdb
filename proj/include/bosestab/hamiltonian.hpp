#pragma once

#include <Eigen/Core>

#include "bosestab/fock.hpp"
#include "bosestab/two_body.hpp"

namespace bosestab {

// (1 - eps) sum_i e_i a_i^+ a_i + (1 / (2 (N - 1))) sum W_ijkl a_i^+ a_j^+ a_l a_k
// on the N-boson Fock space of the modes. The pair term is applied as
// sum_{p,q} V_pq A_p^+ A_q over unordered pairs through the (N-2)-particle
// space, so a matvec costs one dense product of size dim(N-2) x pairs^2.
class FockHamiltonian {
 public:
  FockHamiltonian(const FockBasis& fock, const Eigen::VectorXd& mode_energies, const TwoBodyTensor& W,
                  double eps = 0.0);

  const FockBasis& basis() const { return fock_; }
  long dim() const { return fock_.size(); }
  int particles() const { return fock_.particles(); }
  double eps() const { return eps_; }
  const Eigen::VectorXd& mode_energies() const { return energies_; }
  const TwoBodyTensor& tensor() const { return W_; }

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& in) const;
  // <psi|H|psi> for a unit vector.
  double expectation(const Eigen::VectorXcd& psi) const;
  Eigen::MatrixXcd dense() const;
  // Same operator with a different one-body scaling (the tensor is shared).
  FockHamiltonian with_eps(double eps) const;

 private:
  FockBasis fock_;
  Eigen::VectorXd energies_;
  TwoBodyTensor W_;
  double eps_;
  Eigen::VectorXd diagonal_;
  bool interacting_ = false;
  RemovalTable pairs_;
  Eigen::MatrixXcd V_;  // pair couplings with the 1/(2(N-1)) prefactor folded in
};

// Two-body operator on ordered pairs, the d^2 x d^2 matrix
// (H2)_{(ij),(kl)} = delta_ik delta_jl (e_i + e_j) + W_ijkl.
Eigen::MatrixXcd two_body_hamiltonian(const Eigen::VectorXd& mode_energies, const TwoBodyTensor& W);

// N-boson condensate in u = sum_i c_i phi_i: coefficients
// sqrt(N! / prod n_i!) prod c_i^{n_i}. c must be a unit vector.
Eigen::VectorXcd product_state(const Eigen::VectorXcd& c, const FockBasis& fock);

// Energy per particle of the condensate: <u|h|u> + (1/2) <uu|W|uu>.
double condensate_energy(const Eigen::VectorXcd& c, const Eigen::VectorXd& mode_energies, const TwoBodyTensor& W);

struct CondensateOptimum {
  Eigen::VectorXcd c;
  double energy = 0.0;
  int iterations = 0;
};

// Minimizes condensate_energy over unit c by a normalized gradient flow from
// the lowest mode; deterministic.
CondensateOptimum best_condensate(const Eigen::VectorXd& mode_energies, const TwoBodyTensor& W, double tol = 1e-12);

}  // namespace bosestab
