#include "bosestab/propagate.hpp"

#include <cmath>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {

NlsTrajectory propagate_nls(const Field& u0, const NlsProblem& problem, double T, double dt,
                            const PropagateOptions& opt) {
  if (!problem.A.is_zero()) throw ValidationError("propagate_nls requires A = 0");
  if (!(u0.grid == problem.grid)) throw ValidationError("propagate_nls: grid mismatch");
  if (std::abs(norm(u0) - 1.0) > 1e-8) throw ValidationError("propagate_nls: initial state not normalized");
  if (!(dt > 0.0) || !(T >= 0.0)) throw ValidationError("propagate_nls: need dt > 0 and T >= 0");

  const NlsFunctional F(problem);
  const Grid2D& g = problem.grid;
  const auto& a = axes(g);
  const cplx I(0.0, 1.0);
  const Eigen::ArrayXcd half_kinetic = (-I * 0.5 * dt * a.k_squared).exp();
  const Eigen::ArrayXd& V = F.one_body().potential();
  const int steps = static_cast<int>(std::llround(T / dt));

  NlsTrajectory tr;
  auto record = [&](double t, const Field& u) {
    tr.times.push_back(t);
    tr.norms.push_back(norm(u));
    tr.energies.push_back(F.energy_unchecked(u));
    tr.states.push_back(u);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(tr.norms.back() - tr.norms.front()));
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(tr.energies.back() - tr.energies.front()));
  };

  Field u = u0;
  record(0.0, u);
  for (int s = 1; s <= steps; ++s) {
    u.values = fft_inverse(g, fft_forward(g, u.values) * half_kinetic);
    const Eigen::ArrayXd pot = V + F.mean_field(u.values);
    u.values *= (-I * dt * pot).exp();
    u.values = fft_inverse(g, fft_forward(g, u.values) * half_kinetic);
    if (s % std::max(opt.record_every, 1) == 0 || s == steps) record(s * dt, u);
  }
  const double scale = std::max(1.0, std::abs(tr.energies.front()));
  tr.energy_warning = tr.max_energy_drift > opt.energy_drift_warning * scale;
  tr.status = tr.energy_warning ? "energy-drift" : "ok";
  return tr;
}

}  // namespace bosestab
