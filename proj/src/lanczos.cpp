#include "bosestab/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bosestab/error.hpp"

namespace bosestab {

ManyBodyResult ground_state(const FockHamiltonian& H, const LanczosOptions& opt) {
  if (!(opt.tolerance > 0.0)) throw ValidationError("ground_state: tolerance must be positive");
  const long n = H.dim();
  ManyBodyResult res;
  res.N = H.particles();
  res.eps = H.eps();
  res.seed = opt.seed;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd x(n);
  for (long i = 0; i < n; ++i) x[i] = nd(rng);
  x.normalize();

  const int m_max = static_cast<int>(std::min<long>(opt.krylov, n));
  Eigen::MatrixXcd Q(n, m_max);
  Eigen::VectorXcd w, Hx;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    Q.col(0) = x;
    int m = 0;
    while (true) {
      H.apply(Q.col(m), w);
      ++res.matvecs;
      alpha.push_back(Q.col(m).dot(w).real());
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(m + 1) * (Q.leftCols(m + 1).adjoint() * w);
      ++m;
      if (m == m_max) break;
      const double b = w.norm();
      if (b < 1e-13 * std::max(1.0, std::abs(alpha.back()))) break;
      beta.push_back(b);
      Q.col(m) = w / b;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    x = Q.leftCols(m) * es.eigenvectors().col(0).cast<std::complex<double>>();
    x.normalize();
    res.gap = m > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0] : 0.0;
    H.apply(x, Hx);
    ++res.matvecs;
    res.E = x.dot(Hx).real();
    res.residual = (Hx - res.E * x).norm();
    if (res.residual <= opt.tolerance) {
      res.converged = true;
      break;
    }
  }
  // Phase convention: largest component real and positive.
  long imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  x *= std::conj(x[imax]) / std::abs(x[imax]);
  res.psi = x;
  res.e_N = res.E / res.N;
  res.degenerate = n > 1 && res.gap < 1e-8;
  if (!res.converged)
    res.flag = "not-converged";
  else if (res.degenerate)
    res.flag = "degenerate";
  return res;
}

}  // namespace bosestab
