#include "bosestab/potentials.hpp"

#include <cmath>

#include "bosestab/error.hpp"

namespace bosestab {

double PotentialSpec::operator()(double x1, double x2) const {
  switch (kind) {
    case PotentialKind::harmonic:
      return coefficient * (x1 * x1 + x2 * x2);
    case PotentialKind::power:
      return coefficient * std::pow(std::hypot(x1, x2), exponent);
    case PotentialKind::custom:
      if (!custom) throw ValidationError("custom potential without a sampler");
      return custom(x1, x2);
  }
  return 0.0;
}

PotentialSpec PotentialSpec::harmonic(double coefficient) {
  PotentialSpec v;
  v.kind = PotentialKind::harmonic;
  v.coefficient = coefficient;
  v.exponent = 2.0;
  // |x|^2 coefficient >= |x|^2 / c - c holds with c = max(1, 1/coefficient).
  v.trap_constant = coefficient >= 1.0 ? 1.0 : 1.0 / coefficient;
  return v;
}

std::array<double, 2> VectorPotentialSpec::operator()(double x1, double x2) const {
  switch (kind) {
    case VectorPotentialKind::zero:
      return {0.0, 0.0};
    case VectorPotentialKind::uniform_field:
      return {-0.5 * field_strength * x2, 0.5 * field_strength * x1};
    case VectorPotentialKind::custom:
      if (!custom) throw ValidationError("custom vector potential without a sampler");
      return custom(x1, x2);
  }
  return {0.0, 0.0};
}

VectorPotentialSpec VectorPotentialSpec::uniform(double B) {
  VectorPotentialSpec a;
  a.kind = B == 0.0 ? VectorPotentialKind::zero : VectorPotentialKind::uniform_field;
  a.field_strength = B;
  return a;
}

Eigen::ArrayXd sample_potential(const Grid2D& g, const PotentialSpec& V) {
  const auto& a = axes(g);
  Eigen::ArrayXd out(g.size());
  for (long i = 0; i < g.size(); ++i) out[i] = V(a.x1[i], a.x2[i]);
  return out;
}

void sample_vector_potential(const Grid2D& g, const VectorPotentialSpec& A, Eigen::ArrayXd& a1,
                             Eigen::ArrayXd& a2) {
  const auto& ax = axes(g);
  a1.resize(g.size());
  a2.resize(g.size());
  for (long i = 0; i < g.size(); ++i) {
    const auto v = A(ax.x1[i], ax.x2[i]);
    a1[i] = v[0];
    a2[i] = v[1];
  }
}

double curl_fd(const VectorPotentialSpec& A, double x1, double x2, double h) {
  const double d1a2 = (A(x1 + h, x2)[1] - A(x1 - h, x2)[1]) / (2 * h);
  const double d2a1 = (A(x1, x2 + h)[0] - A(x1, x2 - h)[0]) / (2 * h);
  return d1a2 - d2a1;
}

}  // namespace bosestab
