#include "bosestab/definetti.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "bosestab/error.hpp"

namespace bosestab {

using cmat = Eigen::MatrixXcd;

double half_trace_norm(const cmat& A) {
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace {

struct Model {
  std::vector<cmat> B;
  std::vector<double> lambda;
};

cmat atom(const cmat& B) {
  const cmat g = B * B.adjoint();
  return g / g.trace().real();
}

cmat mixture(const Model& m) {
  const long d = m.B[0].rows();
  cmat S = cmat::Zero(d * d, d * d);
  for (size_t j = 0; j < m.B.size(); ++j) {
    if (m.lambda[j] == 0.0) continue;
    const cmat g = atom(m.B[j]);
    S += m.lambda[j] * cmat(Eigen::kroneckerProduct(g, g));
  }
  return S;
}

// Smoothed objective sum sqrt(x^2 + mu^2) and its derivative matrix.
double smoothed(const cmat& D, double mu, cmat* G) {
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (D + D.adjoint()));
  const Eigen::VectorXd x = es.eigenvalues();
  const Eigen::VectorXd r = (x.array().square() + mu * mu).sqrt();
  if (G) *G = es.eigenvectors() * (x.array() / r.array()).matrix().asDiagonal() * es.eigenvectors().adjoint();
  return r.sum();
}

// Euclidean projection onto {lambda >= 0, sum lambda <= 1}.
void project_weights(std::vector<double>& l) {
  for (double& v : l) v = std::max(v, 0.0);
  if (std::accumulate(l.begin(), l.end(), 0.0) <= 1.0) return;
  std::vector<double> s = l;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    cum += s[i];
    const double t = (cum - 1.0) / (i + 1);
    if (s[i] - t > 0.0) theta = t;
  }
  for (double& v : l) v = std::max(v - theta, 0.0);
}

// Tr_2 [G (1 x g)] + Tr_1 [G (g x 1)] for d^2 x d^2 G and d x d g.
cmat contract(const cmat& G, const cmat& g) {
  const long d = g.rows();
  cmat K = cmat::Zero(d, d);
  for (long i = 0; i < d; ++i)
    for (long k = 0; k < d; ++k)
      for (long j = 0; j < d; ++j)
        for (long l = 0; l < d; ++l) {
          // df = tr(K dg) for S = dg x g + g x dg; (A x B)_{(ij),(kl)} = A_ik B_jl.
          K(k, i) += G(k * d + j, i * d + l) * g(l, j);
          K(j, l) += G(k * d + j, i * d + l) * g(i, k);
        }
  return K;
}

double descend(const cmat& target, Model& m, int iterations, int& used) {
  const long d = m.B[0].rows();
  const int stages = 8;
  double mu = 1e-2;
  for (int st = 0; st < stages; ++st, mu *= 0.1) {
    const int steps = iterations / stages;
    double tau = 0.1;
    cmat G;
    double f = smoothed(target - mixture(m), mu, &G);
    for (int it = 0; it < steps; ++it, ++used) {
      // Gradients of f(target - sum lambda_j g_j x g_j).
      std::vector<double> dl(m.B.size());
      std::vector<cmat> dB(m.B.size());
      for (size_t j = 0; j < m.B.size(); ++j) {
        const cmat g = atom(m.B[j]);
        dl[j] = -(G * cmat(Eigen::kroneckerProduct(g, g))).trace().real();
        const cmat K = -m.lambda[j] * contract(G, g);
        const double t = (m.B[j] * m.B[j].adjoint()).trace().real();
        dB[j] = 2.0 * (K - (K * g).trace().real() * cmat::Identity(d, d)) * m.B[j] / t;
      }
      bool accepted = false;
      while (tau > 1e-12) {
        Model trial = m;
        for (size_t j = 0; j < m.B.size(); ++j) {
          trial.lambda[j] -= tau * dl[j];
          trial.B[j] -= tau * dB[j];
        }
        project_weights(trial.lambda);
        cmat Gt;
        const double ft = smoothed(target - mixture(trial), mu, &Gt);
        if (ft < f) {
          m = std::move(trial);
          f = ft;
          G = std::move(Gt);
          tau *= 1.5;
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted) break;
    }
  }
  return half_trace_norm(target - mixture(m));
}

}  // namespace

DeFinettiFit fit_definetti(const Rdm& gamma2, int N, const DeFinettiOptions& opt) {
  if (gamma2.k != 2) throw ValidationError("fit_definetti: needs a two-body RDM");
  if (opt.n_atoms < 1) throw ValidationError("fit_definetti: n_atoms must be at least 1");
  if (N < 2) throw ValidationError("fit_definetti: N must be at least 2");
  const int d = gamma2.d;
  if (std::abs(gamma2.trace() - 1.0) > 1e-8) throw ValidationError("fit_definetti: input trace differs from 1");
  if (gamma2.min_eigenvalue() < -1e-10) throw ValidationError("fit_definetti: input is not positive");
  const cmat& target = gamma2.matrix;
  const Rdm g1 = partial_trace(gamma2);
  Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (g1.matrix + g1.matrix.adjoint()));
  const cmat& V = es.eigenvectors();
  const Eigen::VectorXd p = es.eigenvalues().cwiseMax(0.0);

  std::mt19937_64 rng(opt.seed);
  std::gamma_distribution<double> gam(1.0, 1.0);
  auto diagonal_atom = [&](const Eigen::VectorXd& q) { return cmat(V * q.cwiseSqrt().cast<cplx>().asDiagonal()); };
  auto random_mixture = [&]() {
    Eigen::VectorXd q(d);
    for (int i = 0; i < d; ++i) q[i] = gam(rng) + 1e-3;
    return diagonal_atom(q / q.sum());
  };

  DeFinettiFit best;
  best.error = std::numeric_limits<double>::infinity();
  best.seed = opt.seed;
  best.reference = std::sqrt(std::log(static_cast<double>(d)) / N);
  const int na = opt.n_atoms;
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    Model m;
    m.B.resize(na);
    m.lambda.assign(na, 0.0);
    if (r == 0) {
      // The one-body state itself carries all the weight.
      m.B[0] = diagonal_atom(p / p.sum());
      m.lambda[0] = 1.0;
      for (int j = 1; j < na; ++j) m.B[j] = random_mixture();
    } else if (r == 1) {
      // Spectral projectors of gamma1 weighted by its eigenvalues.
      for (int j = 0; j < na; ++j) {
        if (j < d) {
          Eigen::VectorXd q = Eigen::VectorXd::Constant(d, 1e-6);
          q[d - 1 - j] = 1.0;
          m.B[j] = diagonal_atom(q / q.sum());
          m.lambda[j] = p[d - 1 - j];
        } else {
          m.B[j] = random_mixture();
        }
      }
    } else {
      for (int j = 0; j < na; ++j) {
        m.B[j] = random_mixture();
        m.lambda[j] = 1.0 / na;
      }
    }
    project_weights(m.lambda);
    const double start = half_trace_norm(target - mixture(m));
    int used = 0;
    Model fitted = m;
    double err = descend(target, fitted, opt.iterations, used);
    if (start <= err) {
      fitted = m;
      err = start;
    }
    best.iterations += used;
    if (err < best.error) {
      best.error = err;
      best.best_restart = r;
      best.atoms.clear();
      for (const auto& B : fitted.B) best.atoms.push_back(atom(B));
      best.weights = fitted.lambda;
    }
  }
  return best;
}

}  // namespace bosestab
