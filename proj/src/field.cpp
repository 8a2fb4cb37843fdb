#include "bosestab/field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>

#include "bosestab/error.hpp"
#include "bosestab/fft.hpp"

namespace bosestab {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

Field::Field(const Grid2D& g, Eigen::ArrayXcd v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) throw ValidationError("field: value count does not match grid");
}

Field sample(const Grid2D& g, const std::function<cplx(double, double)>& fn) {
  const auto& a = axes(g);
  Field f(g);
  for (long i = 0; i < g.size(); ++i) f.values[i] = fn(a.x1[i], a.x2[i]);
  return f;
}

Field oscillator_gaussian(const Grid2D& g, double center1, double center2) {
  const double amp = 1.0 / std::sqrt(std::numbers::pi);
  return sample(g, [&](double x1, double x2) {
    const double r2 = (x1 - center1) * (x1 - center1) + (x2 - center2) * (x2 - center2);
    return cplx(amp * std::exp(-0.5 * r2), 0.0);
  });
}

double integrate(const Grid2D& g, const Eigen::ArrayXd& f) { return f.sum() * g.cell_area(); }

cplx integrate(const Grid2D& g, const Eigen::ArrayXcd& f) { return f.sum() * g.cell_area(); }

cplx inner(const Field& f, const Field& g) {
  if (!(f.grid == g.grid)) throw ValidationError("inner: grid mismatch");
  return (f.values.conjugate() * g.values).sum() * f.grid.cell_area();
}

double norm_squared(const Field& f) { return f.values.abs2().sum() * f.grid.cell_area(); }

double norm(const Field& f) { return std::sqrt(norm_squared(f)); }

Field normalized(const Field& f) {
  const double nrm = norm(f);
  if (!(nrm > 0.0)) throw ValidationError("normalized: zero field");
  return Field(f.grid, f.values / nrm);
}

bool all_finite(const Field& f) { return f.values.isFinite().all(); }

Eigen::ArrayXcd minus_laplacian(const Grid2D& g, const Eigen::ArrayXcd& f) {
  return fft_inverse(g, fft_forward(g, f) * axes(g).k_squared);
}

void gradient(const Grid2D& g, const Eigen::ArrayXcd& f, Eigen::ArrayXcd& d1, Eigen::ArrayXcd& d2) {
  const auto& a = axes(g);
  const Eigen::ArrayXcd F = fft_forward(g, f);
  const cplx I(0.0, 1.0);
  d1 = fft_inverse(g, F * (I * a.k1));
  d2 = fft_inverse(g, F * (I * a.k2));
}

double gradient_norm_squared(const Field& f) {
  const auto& g = f.grid;
  const Eigen::ArrayXcd F = fft_forward(g, f.values);
  // Parseval: dx^2 sum |f|^2 = dx^2 / n^2 sum |F|^2.
  return (F.abs2() * axes(g).k_squared).sum() * g.cell_area() / static_cast<double>(g.size());
}

double momentum_norm_squared(const Field& f) {
  const auto& g = f.grid;
  const Eigen::ArrayXcd F = fft_forward(g, f.values) * g.cell_area();
  const double dk = g.momentum_spacing();
  return F.abs2().sum() * (dk * dk) / (4.0 * std::numbers::pi * std::numbers::pi);
}

Eigen::ArrayXcd convolve(const Grid2D& g, const Eigen::ArrayXcd& rho, const Eigen::ArrayXd& kernel_hat) {
  return fft_inverse(g, fft_forward(g, rho) * kernel_hat);
}

namespace {
constexpr char kFieldMagic[8] = {'B', 'S', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void save_field(const std::string& path, const Field& f, const std::string& kind) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kFieldMagic, sizeof kFieldMagic);
  put(out, static_cast<std::uint32_t>(f.grid.n));
  put(out, f.grid.L);
  put(out, static_cast<std::uint32_t>(kind.size()));
  out.write(kind.data(), static_cast<std::streamsize>(kind.size()));
  for (long i = 0; i < f.values.size(); ++i) {
    put(out, f.values[i].real());
    put(out, f.values[i].imag());
  }
  if (!out) throw IoError("write failed: " + path);
}

Field load_field(const std::string& path, std::string* kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + 8, kFieldMagic)) throw IoError(path + ": not a field file");
  const auto n = get<std::uint32_t>(in);
  const auto L = get<double>(in);
  const auto klen = get<std::uint32_t>(in);
  if (!in || klen > 4096) throw IoError(path + ": corrupt header");
  std::string k(klen, '\0');
  in.read(k.data(), klen);
  const Grid2D g = make_grid(static_cast<int>(n), L);
  Field f(g);
  for (long i = 0; i < g.size(); ++i) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    f.values[i] = cplx(re, im);
  }
  if (!in) throw IoError(path + ": truncated payload");
  if (kind) *kind = std::move(k);
  return f;
}

}  // namespace bosestab
