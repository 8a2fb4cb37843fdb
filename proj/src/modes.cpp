#include "bosestab/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"
#include "bosestab/one_body.hpp"

namespace bosestab {

Field ModeBasis::mode(int i) const { return Field(grid, phi.col(i).array()); }

ModeBasis ModeBasis::leading(int d_small) const {
  if (d_small < 1 || d_small > size()) throw ValidationError("leading: requested mode count out of range");
  ModeBasis b = *this;
  b.phi = phi.leftCols(d_small);
  b.energies = energies.head(d_small);
  b.cutoff = energies[d_small - 1];
  b.cutoff_adjusted = false;
  b.splits_level =
      d_small < size() && energies[d_small] - energies[d_small - 1] < kDegeneracyTolerance * (1 + std::abs(energies[d_small]));
  return b;
}

Eigen::VectorXcd ModeBasis::coefficients(const Field& u) const {
  if (!(u.grid == grid)) throw ValidationError("coefficients: grid mismatch");
  return phi.adjoint() * u.values.matrix() * grid.cell_area();
}

Eigen::MatrixXcd ModeBasis::gram() const { return phi.adjoint() * phi * grid.cell_area(); }

namespace {

void fix_gauge(Eigen::Ref<Eigen::VectorXcd> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  long idx = 0;
  while (std::abs(v[idx]) < (1.0 - 1e-8) * peak) ++idx;
  v *= std::conj(v[idx]) / std::abs(v[idx]);
  v[idx] = std::abs(v[idx]);
}

// -d^2/dx^2 + c x^2 on the periodic 1D grid, spectral second derivative.
Eigen::MatrixXd oscillator_1d(const Grid2D& g, double c) {
  const int n = g.n;
  Eigen::MatrixXd K(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) {
        const double k = g.momentum(m);
        s += k * k * std::cos(k * (a - b) * g.spacing());
      }
      K(a, b) = s / n;
    }
    const double x = g.coordinate(a);
    K(a, a) += c * x * x;
  }
  return K;
}

struct Level {
  double energy;
  int a, b;
};

// How many of the sorted values to keep given the selection; widens to whole
// levels for a cutoff and reports splitting for a count.
int select_count(const std::vector<double>& e, const ModeSelection& sel, bool& adjusted, bool& splits,
                 double& cutoff) {
  auto same_level = [](double x, double y) { return std::abs(x - y) < kDegeneracyTolerance * (1 + std::abs(y)); };
  adjusted = splits = false;
  int d;
  if (sel.count > 0) {
    d = sel.count;
    if (d > static_cast<int>(e.size())) throw ValidationError("build_mode_basis: not enough eigenpairs computed");
    splits = d < static_cast<int>(e.size()) && same_level(e[d], e[d - 1]);
    cutoff = e[d - 1];
    return d;
  }
  d = static_cast<int>(std::upper_bound(e.begin(), e.end(), sel.cutoff) - e.begin());
  cutoff = sel.cutoff;
  while (d > 0 && d < static_cast<int>(e.size()) && same_level(e[d], e[d - 1])) {
    ++d;
    adjusted = true;
  }
  if (adjusted) cutoff = e[d - 1];
  return d;
}

void check_selection(const ModeSelection& sel) {
  const bool by_count = sel.count > 0, by_cutoff = !std::isnan(sel.cutoff);
  if (by_count == by_cutoff) throw ValidationError("build_mode_basis: set exactly one of d or Lambda");
  if (by_count && sel.count > sel.max_modes) {
    throw ValidationError("build_mode_basis: d = " + std::to_string(sel.count) + " exceeds the cap " +
                          std::to_string(sel.max_modes));
  }
  if (!(sel.tolerance > 0.0)) throw ValidationError("build_mode_basis: tolerance must be positive");
}

ModeBasis separable(const PotentialSpec& V, const Grid2D& g, const ModeSelection& sel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oscillator_1d(g, V.coefficient));
  const Eigen::VectorXd e1 = es.eigenvalues();
  const Eigen::MatrixXd v1 = es.eigenvectors() / std::sqrt(g.spacing());
  const int n = g.n;
  // Candidate pairs: all (a, b) with a + b below a bound large enough to hold
  // the requested count or cutoff.
  std::vector<Level> levels;
  int reach = sel.count > 0 ? sel.count + 2 : n;
  if (sel.count <= 0) {
    reach = 0;
    while (reach < n && e1[0] + e1[reach] <= sel.cutoff * (1 + 1e-6) + 1.0) ++reach;
    reach = std::min(n, reach + 2);
  }
  reach = std::min(reach, n);
  for (int a = 0; a < reach; ++a)
    for (int b = 0; b < reach; ++b) levels.push_back({e1[a] + e1[b], a, b});
  std::sort(levels.begin(), levels.end(), [](const Level& x, const Level& y) { return x.energy < y.energy; });
  // Within a degenerate level order by (a, b) so the result does not depend on
  // rounding in the 1D eigenvalues.
  for (size_t i = 0; i < levels.size();) {
    size_t j = i + 1;
    while (j < levels.size() &&
           levels[j].energy - levels[i].energy < kDegeneracyTolerance * (1 + std::abs(levels[i].energy)))
      ++j;
    std::sort(levels.begin() + i, levels.begin() + j,
              [](const Level& x, const Level& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    i = j;
  }
  std::vector<double> e(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) e[i] = levels[i].energy;

  ModeBasis basis;
  const int d = select_count(e, sel, basis.cutoff_adjusted, basis.splits_level, basis.cutoff);
  if (d > sel.max_modes) {
    throw ValidationError("build_mode_basis: Lambda selects " + std::to_string(d) + " modes, above the cap " +
                          std::to_string(sel.max_modes));
  }
  basis.phi.resize(g.size(), d);
  basis.energies.resize(d);
  for (int m = 0; m < d; ++m) {
    const auto& lv = levels[m];
    Eigen::VectorXcd col(g.size());
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) col[static_cast<long>(i1) * n + i2] = v1(i1, lv.a) * v1(i2, lv.b);
    fix_gauge(col);
    basis.phi.col(m) = col;
    basis.energies[m] = lv.energy;
  }
  basis.method = "separable";
  return basis;
}

// Block LOBPCG for the lowest m eigenpairs of h with a kinetic preconditioner.
void lobpcg(const OneBodyOperator& h, const Grid2D& g, Eigen::MatrixXcd& X, Eigen::VectorXd& theta, int need,
            double tol, double& max_res) {
  const double dA = g.cell_area();
  const long n2 = g.size();
  const int m = static_cast<int>(X.cols());
  const Eigen::ArrayXd& V = h.potential();
  const double alpha = 2.0;
  const Eigen::ArrayXd s = (alpha / (alpha + V.max(0.0))).sqrt();
  const Eigen::ArrayXd inv = alpha / (alpha + axes(g).k_squared);
  auto apply_h = [&](const Eigen::MatrixXcd& Y) {
    Eigen::MatrixXcd HY(n2, Y.cols());
    for (long c = 0; c < Y.cols(); ++c) HY.col(c) = h.apply(Eigen::ArrayXcd(Y.col(c))).matrix();
    return HY;
  };
  auto precondition = [&](const Eigen::MatrixXcd& R) {
    Eigen::MatrixXcd T(n2, R.cols());
    for (long c = 0; c < R.cols(); ++c) {
      const Eigen::ArrayXcd sr = s * R.col(c).array();
      T.col(c) = (s * fft_inverse(g, fft_forward(g, sr) * inv)).matrix();
    }
    return T;
  };
  // Rayleigh-Ritz on span(S): orthonormalize through the Gram eigenbasis,
  // dropping directions below a relative threshold.
  auto ritz = [&](const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& HS, Eigen::MatrixXcd& C, Eigen::VectorXd& vals) {
    const Eigen::MatrixXcd G = S.adjoint() * S * dA;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ge(0.5 * (G + G.adjoint()));
    const double top = ge.eigenvalues().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < G.rows(); ++i)
      if (ge.eigenvalues()[i] > 1e-12 * top) keep.push_back(i);
    Eigen::MatrixXcd T(G.rows(), keep.size());
    for (size_t j = 0; j < keep.size(); ++j)
      T.col(j) = ge.eigenvectors().col(keep[j]) / std::sqrt(ge.eigenvalues()[keep[j]]);
    Eigen::MatrixXcd Hs = T.adjoint() * (S.adjoint() * HS * dA) * T;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> he(0.5 * (Hs + Hs.adjoint()));
    C = T * he.eigenvectors().leftCols(m);
    vals = he.eigenvalues().head(m);
  };

  Eigen::MatrixXcd HX = apply_h(X);
  Eigen::MatrixXcd C;
  ritz(X, HX, C, theta);
  X = X * C;
  HX = HX * C;
  Eigen::MatrixXcd P, HP;
  for (int it = 0; it < 2000; ++it) {
    Eigen::MatrixXcd R = HX - X * theta.asDiagonal();
    max_res = 0.0;
    for (int i = 0; i < need; ++i) max_res = std::max(max_res, std::sqrt(R.col(i).squaredNorm() * dA));
    if (max_res <= tol) return;
    const Eigen::MatrixXcd W = precondition(R);
    const Eigen::MatrixXcd HW = apply_h(W);
    const long cols = X.cols() + W.cols() + P.cols();
    Eigen::MatrixXcd S(n2, cols), HS(n2, cols);
    S << X, W, P;
    HS << HX, HW, HP;
    for (long c = m; c < cols; ++c) {
      const double nc = S.col(c).norm();
      if (nc > 0.0) {
        S.col(c) /= nc;
        HS.col(c) /= nc;
      }
    }
    ritz(S, HS, C, theta);
    Eigen::MatrixXcd CP = C;
    CP.topRows(m).setZero();
    X = S * C;
    HX = HS * C;
    P = S * CP;
    HP = HS * CP;
  }
  throw ValidationError("build_mode_basis: eigensolver did not reach the residual target");
}

ModeBasis iterative(const PotentialSpec& V, const VectorPotentialSpec& A, const Grid2D& g, const ModeSelection& sel) {
  const OneBodyOperator h(g, V, A);
  // Start from the separable oscillator modes, then enlarge the block until a
  // cutoff request is covered by a whole level.
  const double c = V.kind == PotentialKind::custom ? 1.0 : std::max(V.coefficient, 1e-3);
  PotentialSpec start = PotentialSpec::harmonic(c);
  int need = sel.count > 0 ? sel.count + 1 : 8;
  while (true) {
    const int block = need + std::max(4, need / 4);
    if (block > sel.max_modes + 8) {
      throw ValidationError("build_mode_basis: Lambda selects more modes than the cap " +
                            std::to_string(sel.max_modes));
    }
    ModeBasis seed = separable(start, g, ModeSelection::modes(block));
    Eigen::MatrixXcd X = seed.phi;
    Eigen::VectorXd theta;
    double max_res = 0.0;
    lobpcg(h, g, X, theta, need, sel.tolerance, max_res);
    std::vector<double> e(theta.data(), theta.data() + need);
    if (sel.count <= 0 && e.back() <= sel.cutoff) {
      need *= 2;
      continue;
    }
    ModeBasis basis;
    const int d = select_count(e, sel, basis.cutoff_adjusted, basis.splits_level, basis.cutoff);
    if (sel.count <= 0 && d == need) {
      need *= 2;
      continue;
    }
    if (d > sel.max_modes) {
      throw ValidationError("build_mode_basis: Lambda selects " + std::to_string(d) + " modes, above the cap " +
                            std::to_string(sel.max_modes));
    }
    basis.phi = X.leftCols(d);
    for (int i = 0; i < d; ++i) fix_gauge(basis.phi.col(i));
    basis.energies = theta.head(d);
    basis.max_residual = max_res;
    basis.method = "lobpcg";
    return basis;
  }
}

}  // namespace

ModeBasis build_mode_basis(const PotentialSpec& V, const VectorPotentialSpec& A, const Grid2D& g,
                           const ModeSelection& sel) {
  check_selection(sel);
  const bool harmonic = V.kind == PotentialKind::harmonic || (V.kind == PotentialKind::power && V.exponent == 2.0);
  ModeBasis basis = harmonic && A.is_zero() ? separable(V, g, sel) : iterative(V, A, g, sel);
  basis.grid = g;
  basis.V = V;
  basis.A = A;
  if (basis.method == "separable") {
    const OneBodyOperator h(g, V, A);
    const double dA = g.cell_area();
    for (int i = 0; i < basis.size(); ++i) {
      const Eigen::ArrayXcd r = h.apply(Eigen::ArrayXcd(basis.phi.col(i))) - basis.energies[i] * basis.phi.col(i).array();
      basis.max_residual = std::max(basis.max_residual, std::sqrt(r.abs2().sum() * dA));
    }
  }
  return basis;
}

std::vector<double> fock_darwin_levels(double B, int count) {
  const double omega = std::sqrt(1.0 + B * B / 4.0);
  std::vector<double> e;
  const int span = count + 2;
  for (int n = 0; n <= span; ++n)
    for (int m = -span; m <= span; ++m) e.push_back(2.0 * omega * (2 * n + std::abs(m) + 1) + B * m);
  std::sort(e.begin(), e.end());
  e.resize(count);
  return e;
}

Eigen::MatrixXcd rotation_by_pi(const ModeBasis& basis) {
  const int n = basis.grid.n;
  Eigen::MatrixXcd R(basis.phi.rows(), basis.phi.cols());
  // x_i = -L + i dx, so -x_i sits at index (n - i) mod n.
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      R.row(static_cast<long>(i1) * n + i2) = basis.phi.row(static_cast<long>((n - i1) % n) * n + (n - i2) % n);
  return basis.phi.adjoint() * R * basis.grid.cell_area();
}

}  // namespace bosestab
