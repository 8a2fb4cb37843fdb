#include "bosestab/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "bosestab/error.hpp"

namespace bosestab {

double Grid2D::momentum_spacing() const { return std::numbers::pi / L; }

double Grid2D::momentum(int m) const {
  const int shifted = m < n / 2 ? m : m - n;
  return shifted * momentum_spacing();
}

Grid2D make_grid(int n, double L) {
  if (n < 8 || n % 2 != 0) {
    throw ValidationError("grid: n must be an even integer >= 8, got " + std::to_string(n));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw ValidationError("grid: half-width L must be positive and finite");
  }
  return Grid2D{n, L};
}

const GridAxes& axes(const Grid2D& g) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<GridAxes>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g.n, g.L}];
  if (!slot) {
    auto a = std::make_unique<GridAxes>();
    const long size = g.size();
    a->x1.resize(size);
    a->x2.resize(size);
    a->k1.resize(size);
    a->k2.resize(size);
    for (int i1 = 0; i1 < g.n; ++i1) {
      for (int i2 = 0; i2 < g.n; ++i2) {
        const long idx = static_cast<long>(i1) * g.n + i2;
        a->x1[idx] = g.coordinate(i1);
        a->x2[idx] = g.coordinate(i2);
        a->k1[idx] = g.momentum(i1);
        a->k2[idx] = g.momentum(i2);
      }
    }
    a->k_squared = a->k1.square() + a->k2.square();
    slot = std::move(a);
  }
  return *slot;
}

}  // namespace bosestab
