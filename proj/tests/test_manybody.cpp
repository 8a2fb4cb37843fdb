#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"

#include "bosestab/error.hpp"
#include "bosestab/evolve.hpp"
#include "bosestab/fock.hpp"
#include "bosestab/hamiltonian.hpp"
#include "bosestab/lanczos.hpp"
#include "bosestab/modes.hpp"
#include "bosestab/rdm.hpp"
#include "bosestab/two_body.hpp"

using namespace bosestab;

namespace {

struct Setup {
  ModeBasis basis;
  TwoBodyTensor W;
};

const Setup& setup(int d) {
  static std::map<int, Setup> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    const Grid2D g = make_grid(64, 6.0);
    ModeBasis b = build_mode_basis(PotentialSpec::harmonic(), {}, g, ModeSelection::modes(d));
    TwoBodyTensor W = two_body_elements(b, InteractionSpec::gaussian(0.6, 1.0), 4, 0.5);
    it = cache.emplace(d, Setup{std::move(b), std::move(W)}).first;
  }
  return it->second;
}

double dense_ground(const FockHamiltonian& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

std::string magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string m(8, '\0');
  in.read(m.data(), 8);
  return m;
}

}  // namespace

TEST_CASE("oscillator levels") {
  const Grid2D g = make_grid(64, 6.0);
  const ModeBasis b = build_mode_basis(PotentialSpec::harmonic(), {}, g, ModeSelection::modes(6));
  const double expect[] = {2, 4, 4, 6, 6, 6};
  for (int i = 0; i < 6; ++i) CHECK(b.energies[i] == doctest::Approx(expect[i]).epsilon(1e-8));
  CHECK((b.gram() - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(b.max_residual <= 1e-6);
  CHECK_FALSE(b.splits_level);
  CHECK(build_mode_basis(PotentialSpec::harmonic(), {}, g, ModeSelection::modes(5)).splits_level);
  const ModeBasis cut = build_mode_basis(PotentialSpec::harmonic(), {}, g, ModeSelection::up_to(5.0));
  CHECK(cut.size() == 3);
  CHECK(cut.cutoff == doctest::Approx(5.0));
  const ModeBasis lead = b.leading(3);
  CHECK(lead.size() == 3);
  CHECK((lead.phi - b.phi.leftCols(3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_mode_basis(PotentialSpec::harmonic(), {}, g, ModeSelection::modes(0)), ValidationError);
}

TEST_CASE("uniform field levels") {
  const double B = 0.5;
  const Grid2D g = make_grid(64, 6.0);
  const ModeBasis b = build_mode_basis(PotentialSpec::harmonic(), VectorPotentialSpec::uniform(B), g,
                                       ModeSelection::modes(6));
  // sqrt(1 + B^2/4)(2n + |m| + 1) + B m / 2 times 2, written out.
  const double w = std::sqrt(1 + B * B / 4);
  std::vector<double> expect;
  for (int n = 0; n < 4; ++n)
    for (int m = -6; m <= 6; ++m) expect.push_back(2 * w * (2 * n + std::abs(m) + 1) + B * m);
  std::sort(expect.begin(), expect.end());
  const auto fd = fock_darwin_levels(B, 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(fd[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    CHECK(b.energies[i] == doctest::Approx(expect[i]).epsilon(1e-6));
  }
}

TEST_CASE("Fock basis enumeration") {
  CHECK(FockBasis::count(3, 4) == 20);
  CHECK(FockBasis::count(8, 8) == 6435);
  const FockBasis f(3, 4);
  REQUIRE(f.size() == 20);
  CHECK(f.occupation(0, 0) == 3);
  CHECK(f.occupation(f.size() - 1, 3) == 3);
  for (long s = 0; s < f.size(); ++s) {
    int total = 0;
    for (int i = 0; i < 4; ++i) total += f.occupation(s, i);
    CHECK(total == 3);
    CHECK(f.index(f.state(s)) == s);
  }
  // Decreasing lexicographic order.
  for (long s = 1; s < f.size(); ++s) {
    std::vector<int> a(4), b(4);
    for (int i = 0; i < 4; ++i) a[i] = f.occupation(s - 1, i), b[i] = f.occupation(s, i);
    CHECK(a > b);
  }
  CHECK(f.index(std::vector<int>{1, 1, 1, 0}) >= 0);
  CHECK(pair_index(0, 0, 4) == 0);
  CHECK(pair_index(1, 1, 4) == 4);
  CHECK(pair_index(3, 3, 4) == 9);
  CHECK(pair_index(2, 1, 4) == pair_index(1, 2, 4));
}

TEST_CASE("pair elements") {
  const Grid2D g = make_grid(32, 4.0);
  const ModeBasis b = build_mode_basis(PotentialSpec::harmonic(), {}, g, ModeSelection::modes(3));
  const TwoBodyTensor zero = two_body_elements(b, InteractionSpec::none(), 4, 0.5);
  double mx = 0;
  for (auto v : zero.data) mx = std::max(mx, std::abs(v));
  CHECK(mx == 0.0);

  const InteractionSpec w = InteractionSpec::gaussian(0.9, 1.0);
  const TwoBodyTensor W = two_body_elements(b, w, 4, 0.5);
  CHECK(W.exchange_asymmetry() <= 1e-12);
  CHECK(W.hermiticity_defect() <= 1e-12);
  CHECK(W.max_imag() <= 1e-12);

  // Direct double sum with the minimum-image distance.
  const auto& ax = axes(g);
  const Eigen::ArrayXd r0 = b.phi.col(0).array().abs2(), r1 = b.phi.col(1).array().abs2();
  double w00 = 0, w01 = 0;
  for (long i = 0; i < g.size(); ++i)
    for (long j = 0; j < g.size(); ++j) {
      double d1 = ax.x1[i] - ax.x1[j], d2 = ax.x2[i] - ax.x2[j];
      d1 -= 2 * g.L * std::round(d1 / (2 * g.L));
      d2 -= 2 * g.L * std::round(d2 / (2 * g.L));
      const double v = scaled_interaction(w, 4, 0.5, d1, d2);
      w00 += r0[i] * v * r0[j];
      w01 += r0[i] * v * r1[j];
    }
  const double a2 = g.cell_area() * g.cell_area();
  CHECK(W(0, 0, 0, 0).real() == doctest::Approx(w00 * a2).epsilon(1e-8));
  CHECK(W(0, 1, 0, 1).real() == doctest::Approx(w01 * a2).epsilon(1e-8));
  const TwoBodyTensor L2 = leading(W, 2);
  CHECK(L2.d == 2);
  CHECK(L2(1, 0, 0, 1) == W(1, 0, 0, 1));
}

TEST_CASE("two bosons against a first-quantized Hamiltonian") {
  const Setup& s = setup(2);
  const int d = 2;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      H(i * d + j, i * d + j) += s.basis.energies[i] + s.basis.energies[j];
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) H(i * d + j, k * d + l) += s.W(i, j, k, l);
    }
  // Symmetric subspace: orthonormal basis |ii>, (|ij> + |ji>)/sqrt 2.
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d * d, 3);
  P(0, 0) = 1;
  P(3, 1) = 1;
  P(1, 2) = P(2, 2) = 1 / std::sqrt(2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P.adjoint() * H * P);
  const FockHamiltonian F(FockBasis(2, d), s.basis.energies, s.W);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> fs(F.dense());
  for (int i = 0; i < 3; ++i) CHECK(fs.eigenvalues()[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-12));
  CHECK((F.dense() - F.dense().adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("one-body scaling") {
  const Setup& s = setup(4);
  TwoBodyTensor none = s.W;
  std::fill(none.data.begin(), none.data.end(), 0.0);
  const FockHamiltonian H(FockBasis(3, 4), s.basis.energies, none);
  CHECK(dense_ground(H) == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(dense_ground(H.with_eps(0.5)) == doctest::Approx(3.0).epsilon(1e-10));
  const FockHamiltonian Hw(FockBasis(3, 4), s.basis.energies, s.W, 0.0);
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(Hw.dim());
  const Eigen::VectorXcd d = Hw.dense() * x, m = Hw.apply(x);
  CHECK((d - m).norm() <= 1e-12 * d.norm());
}

TEST_CASE("Lanczos against dense diagonalization") {
  for (auto [N, d] : {std::pair{3, 6}, {4, 5}}) {
    const Setup& s = setup(d);
    const FockHamiltonian H(FockBasis(N, d), s.basis.energies, s.W);
    const ManyBodyResult r = ground_state(H);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-10);
    CHECK(r.E == doctest::Approx(dense_ground(H)).epsilon(1e-10));
    CHECK(r.e_N == doctest::Approx(r.E / N));
    CHECK(r.psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    LanczosOptions o;
    o.seed = 99;
    const ManyBodyResult q = ground_state(H, o);
    CHECK(q.E == doctest::Approx(r.E).epsilon(1e-10));
    CHECK(std::abs(std::abs(q.psi.dot(r.psi)) - 1.0) <= 1e-8);
  }
}

TEST_CASE("reduced density matrices") {
  const Setup& s = setup(5);
  const FockBasis fock(4, 5);
  const FockHamiltonian H(fock, s.basis.energies, s.W);
  const ManyBodyResult r = ground_state(H);
  const Rdm g1 = rdm(r, fock, 1), g2 = rdm(r, fock, 2);
  CHECK(g1.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g2.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g1.hermiticity_defect() <= 1e-12);
  CHECK(g2.hermiticity_defect() <= 1e-12);
  CHECK(g1.min_eigenvalue() >= -1e-12);
  CHECK(g2.min_eigenvalue() >= -1e-12);
  CHECK((partial_trace(g2).matrix - g1.matrix).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(energy_identity_check(r, g2, s.basis, s.W) <= 1e-10);

  // Condensates have product RDMs.
  Eigen::VectorXcd c(5);
  c << 0.8, cplx(0.3, 0.2), 0.1, cplx(0, -0.3), 0.2;
  c.normalize();
  const Eigen::VectorXcd psi = product_state(c, fock);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const Rdm p1 = one_body_rdm(psi, fock);
  CHECK((p1.matrix - c * c.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(trace_distance_to_pure(p1.matrix, c) <= 1e-7);
  const Rdm p2 = two_body_rdm(psi, fock);
  Eigen::VectorXcd cc(25);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) cc[i * 5 + j] = c[i] * c[j];
  CHECK((p2.matrix - cc * cc.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(H.expectation(psi) / 4 == doctest::Approx(condensate_energy(c, s.basis.energies, s.W)).epsilon(1e-12));

  const auto ov = condensate_overlap(p1, s.basis.mode(0), s.basis);
  CHECK(ov.value == doctest::Approx(std::norm(c[0])).epsilon(1e-10));
  CHECK(ov.defect <= 1e-10);
  CHECK_FALSE(ov.flagged);
}

TEST_CASE("best condensate is a variational upper bound") {
  const Setup& s = setup(5);
  const auto opt = best_condensate(s.basis.energies, s.W);
  CHECK(opt.c.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const ManyBodyResult r = ground_state(FockHamiltonian(FockBasis(4, 5), s.basis.energies, s.W));
  CHECK(r.e_N <= opt.energy + 1e-12);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(5);
  e0[0] = 1;
  CHECK(opt.energy <= condensate_energy(e0, s.basis.energies, s.W) + 1e-12);
}

TEST_CASE("Krylov evolution") {
  const Setup& s = setup(4);
  const FockBasis fock(3, 4);
  const FockHamiltonian H(fock, s.basis.energies, s.W);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
  c[0] = 0.8;
  c[1] = 0.6;
  const Eigen::VectorXcd psi0 = product_state(c, fock);
  const ManyBodyTrajectory t = evolve(psi0, H, 1.0, 0.1);
  CHECK(t.max_norm_drift <= 1e-8);
  CHECK(t.max_energy_drift <= 1e-8);
  CHECK(t.times.back() == doctest::Approx(1.0));
  // Against the dense propagator.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense());
  const Eigen::VectorXcd phase = (es.eigenvalues().array() * cplx(0, -1.0)).exp().matrix();
  const Eigen::VectorXcd exact = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * psi0;
  CHECK((t.states.back() - exact).norm() <= 1e-8);
  // Eigenstates only pick up a phase.
  const ManyBodyResult g = ground_state(H);
  const ManyBodyTrajectory s2 = evolve(g.psi, H, 0.5, 0.1);
  CHECK(std::abs(s2.states.back().dot(g.psi)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rotation by pi is a symmetry of the harmonic basis") {
  const Setup& s = setup(6);
  const Eigen::MatrixXcd R = rotation_by_pi(s.basis);
  CHECK((R * R.adjoint() - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-8);
  const Eigen::MatrixXcd E = s.basis.energies.cast<cplx>().asDiagonal();
  CHECK((R * E - E * R).cwiseAbs().maxCoeff() <= 1e-8);
  // Parities of the levels 2, 4, 4, 6, 6, 6 are +, -, -, +, +, +.
  const double parity[] = {1, -1, -1, 1, 1, 1};
  for (int i = 0; i < 6; ++i) CHECK(R(i, i).real() == doctest::Approx(parity[i]).epsilon(1e-8));
}

TEST_CASE("ground energy decreases as modes are added") {
  const Setup& s = setup(6);
  double prev = INFINITY;
  for (int d = 1; d <= 6; ++d) {
    const FockHamiltonian H(FockBasis(3, d), s.basis.energies.head(d), leading(s.W, d));
    const double e = ground_state(H).e_N;
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("binary dumps carry their headers") {
  const Setup& s = setup(2);
  save_fock_basis("fock_dump.bin", FockBasis(3, 2));
  save_two_body("twob_dump.bin", s.W);
  CHECK(magic("fock_dump.bin") == "BSFOCK01");
  CHECK(magic("twob_dump.bin") == "BSTWOB01");
  std::remove("fock_dump.bin");
  std::remove("twob_dump.bin");
  CHECK_THROWS_AS(save_fock_basis("/proc/nonexistent/x.bin", FockBasis(3, 2)), IoError);
}
