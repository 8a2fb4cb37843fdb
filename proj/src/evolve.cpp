#include "bosestab/evolve.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bosestab/error.hpp"
#include "bosestab/rdm.hpp"

namespace bosestab {

namespace {

using cvec = Eigen::VectorXcd;

// One Krylov step of length h. Returns false when the error estimate
// |beta_m [exp(-i T h)]_{m,0}| exceeds tol.
bool krylov_step(const FockHamiltonian& H, const cvec& psi, double h, int m_max, double tol, cvec& out) {
  const long n = psi.size();
  const int m_cap = static_cast<int>(std::min<long>(m_max, n));
  Eigen::MatrixXcd Q(n, m_cap);
  std::vector<double> alpha, beta;
  const double nrm = psi.norm();
  Q.col(0) = psi / nrm;
  cvec w;
  int m = 0;
  double tail = 0.0;
  while (true) {
    H.apply(Q.col(m), w);
    alpha.push_back(Q.col(m).dot(w).real());
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(m + 1) * (Q.leftCols(m + 1).adjoint() * w);
    ++m;
    const double b = w.norm();
    if (m == m_cap || b < 1e-14) {
      tail = m == m_cap && m < n ? b : 0.0;
      break;
    }
    beta.push_back(b);
    Q.col(m) = w / b;
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const Eigen::MatrixXd& U = es.eigenvectors();
  cvec phase(m);
  for (int i = 0; i < m; ++i) phase[i] = std::exp(std::complex<double>(0.0, -h * es.eigenvalues()[i]));
  // exp(-i T h) e_0
  const cvec y = U.cast<std::complex<double>>() * phase.cwiseProduct(U.row(0).transpose().cast<std::complex<double>>());
  if (tail * std::abs(y[m - 1]) > tol) return false;
  out = nrm * (Q.leftCols(m) * y);
  return true;
}

}  // namespace

ManyBodyTrajectory evolve(const cvec& psi0, const FockHamiltonian& H, double T, double dt, const EvolveOptions& opt,
                          const ModeBasis* basis, const NlsTrajectory* reference) {
  if (H.dim() > opt.max_dim) {
    throw ValidationError("evolve: dimension " + std::to_string(H.dim()) + " above the cap " +
                          std::to_string(opt.max_dim));
  }
  if (psi0.size() != H.dim()) throw ValidationError("evolve: state length differs from the operator dimension");
  if (!(dt > 0.0) || !(T >= 0.0)) throw ValidationError("evolve: need dt > 0 and T >= 0");
  if (reference && !basis) throw ValidationError("evolve: a reference trajectory needs the mode basis");
  if (basis && basis->size() != H.basis().modes()) throw ValidationError("evolve: basis size differs from d");

  ManyBodyTrajectory tr;
  const int steps = static_cast<int>(std::llround(T / dt));
  const double E0 = H.expectation(psi0.normalized());
  cvec psi = psi0;
  size_t ref_at = 0;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.states.push_back(psi);
    const double nrm = psi.norm();
    tr.norms.push_back(nrm);
    const double E = H.expectation(psi / nrm);
    tr.energies.push_back(E);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(nrm - psi0.norm()));
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(E - E0));
    tr.gamma1.push_back(one_body_rdm(psi, H.basis()).matrix);
    if (reference) {
      while (ref_at < reference->times.size() && reference->times[ref_at] < t - 1e-9) ++ref_at;
      if (ref_at == reference->times.size() || std::abs(reference->times[ref_at] - t) > 1e-9) {
        throw ValidationError("evolve: reference trajectory has no state at t = " + std::to_string(t));
      }
      const cvec c = basis->coefficients(normalized(reference->states[ref_at]));
      tr.trace_distance.push_back(trace_distance_to_pure(tr.gamma1.back(), c));
    }
  };
  record(0.0);
  for (int s = 1; s <= steps; ++s) {
    // Subdivide until every piece passes the error estimate.
    int pieces = 1;
    cvec next;
    while (true) {
      cvec cur = psi;
      bool ok = true;
      for (int p = 0; p < pieces && ok; ++p) {
        ok = krylov_step(H, cur, dt / pieces, opt.krylov, opt.tolerance, next);
        if (ok) cur = next;
      }
      if (ok) {
        psi = cur;
        tr.substeps += pieces;
        break;
      }
      ++tr.rejected;
      pieces *= 2;
      if (pieces > 1 << 16) throw ValidationError("evolve: Krylov step rejected down to dt / 65536");
    }
    if (s % opt.record_every == 0 || s == steps) record(s * dt);
  }
  return tr;
}

}  // namespace bosestab
