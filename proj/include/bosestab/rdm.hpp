#pragma once

#include <Eigen/Core>

#include "bosestab/fock.hpp"
#include "bosestab/interaction.hpp"
#include "bosestab/lanczos.hpp"
#include "bosestab/modes.hpp"
#include "bosestab/two_body.hpp"

namespace bosestab {

// k-body reduced density matrix on the mode basis, normalized to unit trace.
// k = 1: gamma_ij = <a_j^+ a_i> / N.
// k = 2: d^2 x d^2 matrix on ordered pairs,
//        gamma_(ij),(kl) = <a_k^+ a_l^+ a_j a_i> / (N (N - 1)).
struct Rdm {
  int k = 1;
  int d = 0;
  Eigen::MatrixXcd matrix;

  double trace() const { return matrix.trace().real(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

Rdm one_body_rdm(const Eigen::VectorXcd& psi, const FockBasis& fock);
Rdm two_body_rdm(const Eigen::VectorXcd& psi, const FockBasis& fock);
Rdm rdm(const ManyBodyResult& result, const FockBasis& fock, int k);

// Tr_2 of a two-body RDM.
Rdm partial_trace(const Rdm& gamma2);

// |e_N - (1/2) tr(H2 gamma2)| with H2 built from the mode energies and W.
// The result must come from an eps = 0 assembly.
double energy_identity_check(const ManyBodyResult& result, const Rdm& gamma2, const ModeBasis& basis,
                             const TwoBodyTensor& W);
double energy_identity_check(const ManyBodyResult& result, const Rdm& gamma2, const ModeBasis& basis,
                             const InteractionSpec& w, int N, double beta);

struct CondensateOverlap {
  double value = 0.0;   // <u|gamma1|u> with u expanded in the modes
  double defect = 0.0;  // 1 - ||P u||^2
  bool flagged = false; // defect above 0.05
};

CondensateOverlap condensate_overlap(const Rdm& gamma1, const Field& u, const ModeBasis& basis);

// Tr |gamma1 - |u><u|| for a unit u whose mode coefficients are c; the part of
// u outside the modes enters through one extra orthogonal direction.
double trace_distance_to_pure(const Eigen::MatrixXcd& gamma1, const Eigen::VectorXcd& c);

}  // namespace bosestab
