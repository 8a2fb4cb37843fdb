#include "bosestab/interaction.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {
namespace {

constexpr double kPi = std::numbers::pi;

double bump(double r, double sigma) {
  if (r >= sigma) return 0.0;
  const double t = r * r / (sigma * sigma);
  return std::exp(1.0 - 1.0 / (1.0 - t));
}

// Radial integral 2 pi int_0^R f(r) r dr.
template <class F>
double radial_integral(F&& f, double R) {
  using boost::math::quadrature::gauss_kronrod;
  return 2.0 * kPi * gauss_kronrod<double, 61>::integrate([&](double r) { return f(r) * r; }, 0.0, R, 15, 1e-13);
}

// Tensor-product midpoint quadrature of a custom sampler over [-R, R]^2.
template <class F>
double box_integral(F&& f, double R, int points = 600) {
  const double h = 2.0 * R / points;
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x1 = -R + (i + 0.5) * h;
    for (int j = 0; j < points; ++j) acc += f(x1, -R + (j + 0.5) * h);
  }
  return acc * h * h;
}

}  // namespace

InteractionSpec InteractionSpec::gaussian(double g, double sigma) {
  InteractionSpec w;
  w.form = InteractionForm::gaussian;
  w.strength = g;
  w.range = sigma;
  return w;
}

double InteractionSpec::operator()(double x1, double x2) const {
  const double r2 = x1 * x1 + x2 * x2;
  switch (form) {
    case InteractionForm::gaussian: {
      double v = -strength * std::exp(-r2 / (2.0 * range * range));
      if (repulsive_strength != 0.0)
        v += repulsive_strength * std::exp(-r2 / (2.0 * repulsive_range * repulsive_range));
      return v;
    }
    case InteractionForm::compact_bump:
      return -strength * bump(std::sqrt(r2), range);
    case InteractionForm::custom:
      if (!custom) throw ValidationError("custom interaction without a sampler");
      if (std::abs(x1) > range || std::abs(x2) > range) return 0.0;
      return custom(x1, x2);
  }
  return 0.0;
}

double InteractionSpec::fourier(double k1, double k2) const {
  const double k2sum = k1 * k1 + k2 * k2;
  switch (form) {
    case InteractionForm::gaussian: {
      double v = -strength * 2.0 * kPi * range * range * std::exp(-0.5 * range * range * k2sum);
      if (repulsive_strength != 0.0)
        v += repulsive_strength * 2.0 * kPi * repulsive_range * repulsive_range *
             std::exp(-0.5 * repulsive_range * repulsive_range * k2sum);
      return v;
    }
    case InteractionForm::compact_bump: {
      if (strength == 0.0) return 0.0;
      const double k = std::sqrt(k2sum);
      return -strength *
             radial_integral([&](double r) { return bump(r, range) * std::cyl_bessel_j(0.0, k * r); }, range);
    }
    case InteractionForm::custom: {
      // Real part only: w is required to be even, so the transform is real.
      return box_integral([&](double x1, double x2) { return (*this)(x1, x2) * std::cos(k1 * x1 + k2 * x2); },
                          range);
    }
  }
  return 0.0;
}

double InteractionSpec::integral() const {
  switch (form) {
    case InteractionForm::gaussian:
    case InteractionForm::compact_bump:
      return fourier(0.0, 0.0);
    case InteractionForm::custom:
      return box_integral(*this, range);
  }
  return 0.0;
}

double InteractionSpec::negative_mass() const {
  switch (form) {
    case InteractionForm::gaussian:
      if (repulsive_strength == 0.0) return 2.0 * kPi * range * range * std::max(strength, 0.0);
      return radial_integral([&](double r) { return std::max(-(*this)(r, 0.0), 0.0); },
                             12.0 * std::max(range, repulsive_range));
    case InteractionForm::compact_bump:
      return -std::min(integral(), 0.0);
    case InteractionForm::custom:
      return box_integral([&](double x1, double x2) { return std::max(-(*this)(x1, x2), 0.0); }, range);
  }
  return 0.0;
}

double InteractionSpec::l1_norm() const {
  switch (form) {
    case InteractionForm::gaussian:
      return radial_integral([&](double r) { return std::abs((*this)(r, 0.0)); },
                             12.0 * std::max(range, repulsive_range));
    case InteractionForm::compact_bump:
      return std::abs(integral());
    case InteractionForm::custom:
      return box_integral([&](double x1, double x2) { return std::abs((*this)(x1, x2)); }, range);
  }
  return 0.0;
}

double InteractionSpec::l2_norm_squared() const {
  switch (form) {
    case InteractionForm::gaussian:
      return radial_integral([&](double r) { return std::pow((*this)(r, 0.0), 2); },
                             12.0 * std::max(range, repulsive_range));
    case InteractionForm::compact_bump:
      return radial_integral([&](double r) { return std::pow((*this)(r, 0.0), 2); }, range);
    case InteractionForm::custom:
      return box_integral([&](double x1, double x2) { return std::pow((*this)(x1, x2), 2); }, range);
  }
  return 0.0;
}

double InteractionSpec::min_length_scale() const {
  if (form == InteractionForm::gaussian && repulsive_strength != 0.0) return std::min(range, repulsive_range);
  return range;
}

bool InteractionSpec::is_zero() const {
  if (form == InteractionForm::custom) return !custom;
  return strength == 0.0 && repulsive_strength == 0.0;
}

double scaled_interaction(const InteractionSpec& w, int N, double beta, double x1, double x2) {
  const double s = std::pow(static_cast<double>(N), beta);
  return s * s * w(s * x1, s * x2);
}

Eigen::ArrayXd fourier_weights(const InteractionSpec& w, int N, double beta, const Grid2D& g) {
  const auto& a = axes(g);
  Eigen::ArrayXd out(g.size());
  if (w.is_zero()) return out.setZero();
  const double shrink = std::pow(static_cast<double>(N), -beta);
  if (w.form == InteractionForm::custom) {
    // Transform of the sampled scaled profile; the phase exp(ik L) re-centres
    // the lattice origin at x = 0.
    Eigen::ArrayXcd samples(g.size());
    for (long i = 0; i < g.size(); ++i) samples[i] = scaled_interaction(w, N, beta, a.x1[i], a.x2[i]);
    const Eigen::ArrayXcd F = fft_forward(g, samples);
    for (long i = 0; i < g.size(); ++i) {
      const double phase = (a.k1[i] + a.k2[i]) * g.L;
      out[i] = (F[i] * std::polar(1.0, phase)).real() * g.cell_area();
    }
    return out;
  }
  if (w.form == InteractionForm::compact_bump) {
    // Radial: evaluate once per distinct |k|.
    std::map<double, double> cache;
    for (long i = 0; i < g.size(); ++i) {
      const double k = std::sqrt(a.k_squared[i]) * shrink;
      auto it = cache.find(k);
      if (it == cache.end()) it = cache.emplace(k, w.fourier(k, 0.0)).first;
      out[i] = it->second;
    }
    return out;
  }
  for (long i = 0; i < g.size(); ++i) out[i] = w.fourier(a.k1[i] * shrink, a.k2[i] * shrink);
  return out;
}

bool is_resolved(const InteractionSpec& w, int N, double beta, const Grid2D& g) {
  if (w.is_zero()) return true;
  return w.min_length_scale() * std::pow(static_cast<double>(N), -beta) >= 2.0 * g.spacing();
}

void require_resolved(const InteractionSpec& w, int N, double beta, const Grid2D& g) {
  if (!is_resolved(w, N, beta, g)) {
    const double eff = w.min_length_scale() * std::pow(static_cast<double>(N), -beta);
    throw ValidationError("under-resolved interaction: scaled range " + std::to_string(eff) +
                          " < 2 grid spacings (" + std::to_string(2.0 * g.spacing()) + ") at N=" +
                          std::to_string(N) + ", beta=" + std::to_string(beta));
  }
}

double scaled_integral_on_grid(const InteractionSpec& w, int N, double beta, const Grid2D& g) {
  const auto& a = axes(g);
  double acc = 0.0;
  for (long i = 0; i < g.size(); ++i) acc += scaled_interaction(w, N, beta, a.x1[i], a.x2[i]);
  return acc * g.cell_area();
}

std::string to_string(InteractionForm f) {
  switch (f) {
    case InteractionForm::gaussian:
      return "gaussian";
    case InteractionForm::compact_bump:
      return "compact-bump";
    case InteractionForm::custom:
      return "custom";
  }
  return "?";
}

}  // namespace bosestab
