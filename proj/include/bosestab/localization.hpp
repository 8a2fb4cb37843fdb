#pragma once

#include <Eigen/Core>

#include "bosestab/interaction.hpp"
#include "bosestab/lanczos.hpp"
#include "bosestab/modes.hpp"
#include "bosestab/rdm.hpp"
#include "bosestab/two_body.hpp"

namespace bosestab {

struct LocalizationReport {
  double lhs = 0.0;            // tr((H2 - P H2 P) gamma2), P on the leading d_small modes
  double delta = 0.75;
  double lambda = 0.0;         // eps_{d_small}
  double first_moment = 0.0;   // tr(h gamma1)
  double second_moment = 0.0;  // tr(h x h gamma2)
  double scale = 0.0;          // Lambda^{(delta-1)/2} first^{(1-delta)/2} second^delta
  double fitted_C = 0.0;       // max(0, -lhs) / scale
  int d_small = 0, d_big = 0;
  bool splits_level = false;
  bool pass = false;
};

// gamma2 lives on the d_big modes of `basis`; W is the tensor on the same
// modes. Requires 1 <= d_small < d_big and delta in (1/2, 1].
LocalizationReport localization_defect(const Rdm& gamma2, const ModeBasis& basis, const TwoBodyTensor& W,
                                       int d_small, double delta);
LocalizationReport localization_defect(const Rdm& gamma2, const ModeBasis& basis, const InteractionSpec& w, int N,
                                       double beta, int d_small, double delta);

struct MomentReport {
  double first_moment = 0.0;
  double second_moment = 0.0;
  double eps = 0.0;
  double e_eps = 0.0;         // e_{N,eps}
  double first_bound = 0.0;   // (1 + |e|) / eps
  double second_bound = 0.0;  // first_bound^2
  double fitted_C = 0.0;      // max(first / first_bound, second / second_bound)
};

// Moments of the unperturbed h in a state from an eps-perturbed assembly.
MomentReport moment_report(const ManyBodyResult& result, const Rdm& gamma1, const Rdm& gamma2,
                           const ModeBasis& basis, double eps);

struct TailBound {
  double inner = 0.0;   // int_{|k|<=1} min{1, C^2 Lambda / |k|^2} |w^(N^-beta k)|
  double middle = 0.0;  // int_{1<|k|<=N^beta} C^2 Lambda / |k|^2 |w^(N^-beta k)|
  double outer = 0.0;   // int_{|k|>N^beta} C^2 Lambda / |k|^2 |w^(N^-beta k)|
  double total = 0.0;
  double log_reference = 0.0;  // 2 pi ||w^||_inf C^2 Lambda beta log N
};

// C is the plane-wave constant (||P b_k P|| <= C Lambda^{1/2} / |k|), so the
// squared norms in the integrand carry C^2.
TailBound interaction_tail_bound(const InteractionSpec& w, int N, double beta, double lambda, double C);

}  // namespace bosestab
