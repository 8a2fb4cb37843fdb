#include "bosestab/trend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bosestab/error.hpp"

namespace bosestab {

TrendVerdict classify_trend(const std::vector<int>& N, const std::vector<double>& e) {
  if (N.size() != e.size()) throw ValidationError("classify_trend: size mismatch");
  TrendVerdict t;
  t.decrement_exponent = std::numeric_limits<double>::quiet_NaN();
  if (e.empty()) {
    t.verdict = "indeterminate";
    return t;
  }
  t.witness = *std::min_element(e.begin(), e.end());
  const double scale = 1e-10 * (1.0 + std::abs(t.witness));
  t.strictly_decreasing = true;
  for (size_t i = 1; i < e.size(); ++i) {
    if (N[i] <= N[i - 1]) throw ValidationError("classify_trend: N must increase");
    if (!(e[i] < e[i - 1] - scale)) t.strictly_decreasing = false;
  }
  if (e.size() < 3) {
    t.verdict = "indeterminate";
    return t;
  }
  if (!t.strictly_decreasing) {
    t.verdict = "bounded";
    return t;
  }
  // Least squares of log(decrement per unit N) against log(midpoint N).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const size_t m = e.size() - 1;
  for (size_t i = 0; i < m; ++i) {
    const double x = std::log(0.5 * (N[i] + N[i + 1]));
    const double y = std::log((e[i] - e[i + 1]) / (N[i + 1] - N[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  t.decrement_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (t.decrement_exponent > 0.0)
    t.verdict = "unbounded trend";
  else if (t.decrement_exponent < -1.0)
    t.verdict = "bounded";
  else
    t.verdict = "indeterminate";
  return t;
}

}  // namespace bosestab
