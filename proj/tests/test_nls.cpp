#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"

#include "bosestab/error.hpp"
#include "bosestab/gn.hpp"
#include "bosestab/hartree.hpp"
#include "bosestab/nls.hpp"
#include "bosestab/propagate.hpp"

using namespace bosestab;
constexpr double pi = std::numbers::pi;

namespace {

double a_star() {
  static const double a = shoot_townes().a_star;
  return a;
}

// Radial self-consistent field for -u'' - u'/r + r^2 u + b u^3 = mu u with
// cell-centred finite differences, then Richardson in h.
double radial_scf_energy(double b, double h) {
  const double R = 8.0;
  const int M = static_cast<int>(std::lround(R / h));
  Eigen::VectorXd r(M), u(M);
  for (int j = 0; j < M; ++j) r[j] = (j + 0.5) * h;
  for (int j = 0; j < M; ++j) u[j] = std::exp(-r[j] * r[j] / 2);
  auto normalize = [&](Eigen::VectorXd& v) {
    double s = 0;
    for (int j = 0; j < M; ++j) s += v[j] * v[j] * 2 * pi * r[j] * h;
    v /= std::sqrt(s);
  };
  normalize(u);
  Eigen::VectorXd rho = u.array().square();
  double energy = 0;
  for (int it = 0; it < 400; ++it) {
    // Symmetrized with D = diag(r h).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
    for (int j = 0; j < M; ++j) {
      const double rp = r[j] + h / 2, rm = std::max(0.0, r[j] - h / 2);
      A(j, j) = (rp + rm) / h + r[j] * h * (r[j] * r[j] + b * rho[j]);
      if (j + 1 < M) A(j, j + 1) = A(j + 1, j) = -rp / h;
    }
    Eigen::VectorXd s = (r.array() * h).sqrt();
    Eigen::MatrixXd S = s.asDiagonal().inverse() * A * s.asDiagonal().inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd v = s.asDiagonal().inverse() * es.eigenvectors().col(0);
    if (v.sum() < 0) v = -v;
    normalize(v);
    const Eigen::VectorXd next = v.array().square();
    const double change = (next - rho).cwiseAbs().maxCoeff();
    rho = 0.5 * rho + 0.5 * next;
    u = v;
    double kin = 0, pot = 0, quart = 0;
    for (int j = 0; j + 1 < M; ++j) kin += std::pow((u[j + 1] - u[j]) / h, 2) * 2 * pi * (r[j] + h / 2) * h;
    for (int j = 0; j < M; ++j) {
      pot += r[j] * r[j] * u[j] * u[j] * 2 * pi * r[j] * h;
      quart += std::pow(u[j], 4) * 2 * pi * r[j] * h;
    }
    energy = kin + pot + 0.5 * b * quart;
    if (change < 1e-13) break;
  }
  return energy;
}

NlsProblem delta_problem(double b, int n = 128, double L = 8.0) {
  NlsProblem p;
  p.grid = make_grid(n, L);
  p.coupling = DeltaCoupling{b};
  return p;
}

Field random_field(const Grid2D& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const auto& ax = axes(g);
  Field f(g);
  for (int b = 0; b < 3; ++b) {
    const double c1 = nd(rng), c2 = nd(rng), w = 0.5 + std::abs(nd(rng)) * 0.3;
    const cplx amp(nd(rng), nd(rng));
    for (long i = 0; i < g.size(); ++i)
      f.values[i] += amp * std::exp(-(std::pow(ax.x1[i] - c1, 2) + std::pow(ax.x2[i] - c2, 2)) / (2 * w * w));
  }
  return normalized(f);
}

}  // namespace

TEST_CASE("NLS energy of the oscillator Gaussian") {
  const Grid2D g = make_grid(128, 8.0);
  const Field u = oscillator_gaussian(g);
  CHECK(nls_energy(u, delta_problem(0.0)) == doctest::Approx(2.0).epsilon(1e-8));
  for (double b : {-3.0, 1.0, 5.0})
    CHECK(nls_energy(u, delta_problem(b)) == doctest::Approx(2.0 + b / (4 * pi)).epsilon(1e-8));
  Field v = u;
  v *= 1.01;
  CHECK_THROWS_AS(nls_energy(v, delta_problem(1.0)), ValidationError);
}

TEST_CASE("Hartree interaction matches a direct double sum") {
  const Grid2D g = make_grid(32, 4.0);
  const Field u = oscillator_gaussian(g, 0.3, -0.2);
  const InteractionSpec w = InteractionSpec::gaussian(0.8, 1.0);
  const int N = 4;
  const double beta = 0.5;
  NlsProblem free_p;
  free_p.grid = g;
  NlsProblem hp = free_p;
  hp.coupling = HartreeCoupling{w, N, beta};
  const double interaction = NlsFunctional(hp).energy_unchecked(u) - NlsFunctional(free_p).energy_unchecked(u);

  const auto& ax = axes(g);
  const Eigen::ArrayXd rho = u.values.abs2();
  const double twoL = 2 * g.L;
  double direct = 0;
  for (long i = 0; i < g.size(); ++i)
    for (long j = 0; j < g.size(); ++j) {
      double d1 = ax.x1[i] - ax.x1[j], d2 = ax.x2[i] - ax.x2[j];
      d1 -= twoL * std::round(d1 / twoL);
      d2 -= twoL * std::round(d2 / twoL);
      direct += rho[i] * scaled_interaction(w, N, beta, d1, d2) * rho[j];
    }
  direct *= 0.5 * g.cell_area() * g.cell_area();
  CHECK(interaction == doctest::Approx(direct).epsilon(1e-4));
  CHECK(interaction < 0.0);
}

TEST_CASE("Gagliardo-Nirenberg quotient") {
  const Grid2D g = make_grid(128, 8.0);
  const Field u = oscillator_gaussian(g);
  CHECK(gn_quotient(u) == doctest::Approx(4 * pi).epsilon(1e-8));
  Field v = u;
  v *= cplx(3.0, -1.0);
  CHECK(gn_quotient(v) == doctest::Approx(4 * pi).epsilon(1e-8));
  for (double lam : {0.7, 1.5}) {
    const Field d = sample(g, [&](double x1, double x2) { return std::exp(-lam * lam * (x1 * x1 + x2 * x2) / 2); });
    CHECK(gn_quotient(d) == doctest::Approx(4 * pi).epsilon(1e-6));
  }
  const Grid2D coarse = make_grid(64, 6.0);
  double lowest = INFINITY;
  for (unsigned s = 1; s <= 1000; ++s) lowest = std::min(lowest, gn_quotient(random_field(coarse, s)));
  CHECK(lowest >= a_star() - 1e-6);
}

TEST_CASE("optimal GN constant from two methods") {
  const GnComparison c = compare_a_star(make_grid(128, 10.0), 1e-9);
  CHECK(c.grid.a_star >= 11.6);
  CHECK(c.grid.a_star <= 11.8);
  CHECK(c.shooting.a_star >= 11.6);
  CHECK(c.shooting.a_star <= 11.8);
  CHECK(c.relative_gap <= 1e-3);
  // Gaussian trial gives the upper bound 4 pi.
  CHECK(c.shooting.a_star <= 4 * pi);
}

TEST_CASE("attractive ground state against a radial solver") {
  const double b = -0.5 * a_star();
  const NlsResult r = minimize_nls(delta_problem(b), oscillator_gaussian(make_grid(128, 8.0)));
  REQUIRE(r.status == NlsStatus::converged);
  const double e1 = radial_scf_energy(b, 0.04), e2 = radial_scf_energy(b, 0.02);
  const double oracle = (4 * e2 - e1) / 3;
  CHECK(r.energy == doctest::Approx(oracle).epsilon(1e-4));
  for (size_t i = 1; i < r.energy_trace.size(); ++i) CHECK(r.energy_trace[i] <= r.energy_trace[i - 1] + 1e-12);
}

TEST_CASE("stability dichotomy around a*") {
  const Grid2D g = make_grid(128, 8.0);
  const NlsResult stable = minimize_nls(delta_problem(-0.9 * a_star()), oscillator_gaussian(g));
  CHECK(stable.status == NlsStatus::converged);
  CHECK(stable.energy > 0.0);
  const NlsResult collapsing = minimize_nls(delta_problem(-1.1 * a_star()), oscillator_gaussian(g));
  CHECK(collapsing.status == NlsStatus::collapse_detected);
  for (size_t i = 1; i < collapsing.energy_trace.size(); ++i)
    CHECK(collapsing.energy_trace[i] <= collapsing.energy_trace[i - 1] + 1e-12);
}

TEST_CASE("seeded minimization is reproducible") {
  const Grid2D g = make_grid(64, 6.0);
  NlsProblem p = delta_problem(-3.0, 64, 6.0);
  const NlsResult a = minimize_nls(p, oscillator_gaussian(g), 7), b = minimize_nls(p, oscillator_gaussian(g), 7);
  CHECK(a.energy == b.energy);
  const NlsResult c = minimize_nls(p, oscillator_gaussian(g), 8);
  CHECK(c.energy == doctest::Approx(a.energy).epsilon(1e-8));
}

TEST_CASE("Hartree functional and the lower-bound chain") {
  const Grid2D g = make_grid(128, 8.0);
  const Field u = oscillator_gaussian(g);
  const auto gamma = OneBodyMixedState::pure(u);
  CHECK(sqrt_density_kinetic(gamma) == doctest::Approx(gradient_norm_squared(u)).epsilon(1e-6));
  const InteractionSpec none = InteractionSpec::none();
  CHECK(hartree_energy(gamma, none, 4, 0.5, PotentialSpec::harmonic(), {}) == doctest::Approx(2.0).epsilon(1e-8));

  // Two orthonormal modes with weights 3/4, 1/4.
  const Field v = normalized(sample(g, [](double x1, double x2) { return x1 * std::exp(-(x1 * x1 + x2 * x2) / 2); }));
  OneBodyMixedState mixed{{u, v}, {0.75, 0.25}};
  mixed.validate();
  CHECK(hartree_energy(mixed, none, 4, 0.5, PotentialSpec::harmonic(), {}) ==
        doctest::Approx(0.75 * 2 + 0.25 * 4).epsilon(1e-8));
  OneBodyMixedState bad{{u, u}, {0.5, 0.5}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  const InteractionSpec w = InteractionSpec::gaussian(0.8 * a_star() / (2 * pi), 1.0);
  const auto rep = hartree_bound_report(mixed, w, 4, 0.5, PotentialSpec::harmonic(), {}, a_star());
  CHECK(rep.stability_condition);
  CHECK(rep.chain_holds);
  CHECK(rep.hartree_energy >= rep.middle - 1e-8);
  CHECK(rep.middle >= rep.gn_lower - 1e-8);
  CHECK(rep.gn_lower >= 0.0);
  const InteractionSpec strong = InteractionSpec::gaussian(1.2 * a_star() / (2 * pi), 1.0);
  CHECK_FALSE(hartree_bound_report(mixed, strong, 4, 0.5, PotentialSpec::harmonic(), {}, a_star()).stability_condition);
}

TEST_CASE("split-step propagation") {
  const Grid2D g = make_grid(64, 8.0);
  const Field u0 = oscillator_gaussian(g);
  const NlsTrajectory free = propagate_nls(u0, delta_problem(0.0, 64, 8.0), 1.0, 1e-3, {100});
  const Field& uT = free.states.back();
  CHECK(free.times.back() == doctest::Approx(1.0));
  CHECK((uT.values - std::exp(cplx(0, -2.0)) * u0.values).abs().maxCoeff() <= 1e-6);
  CHECK(free.max_norm_drift <= 1e-12);

  const NlsProblem p = delta_problem(-4.0, 64, 8.0);
  const Field start = oscillator_gaussian(g, 0.5, 0.0);
  const double T = 0.5;
  const Field ref = propagate_nls(start, p, T, T / 2048, {2048}).states.back();
  const Field a = propagate_nls(start, p, T, T / 64, {64}).states.back();
  const Field b = propagate_nls(start, p, T, T / 128, {128}).states.back();
  const double ea = norm(Field(g, a.values - ref.values)), eb = norm(Field(g, b.values - ref.values));
  const double ratio = ea / eb;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
  const NlsTrajectory t = propagate_nls(start, p, T, T / 256, {});
  CHECK(t.max_norm_drift <= 1e-10);
  CHECK(t.max_energy_drift <= 1e-4);
}
