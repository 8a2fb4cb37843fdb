#pragma once

#include <string>
#include <vector>

namespace bosestab {

struct TrendVerdict {
  std::string verdict;  // "bounded", "unbounded trend" or "indeterminate"
  bool strictly_decreasing = false;
  double decrement_exponent = 0.0;  // q in e_N - e_{N+1} ~ N^q (NaN if undefined)
  double witness = 0.0;             // min e_N over the scan
};

// Classifies an e_N sequence over increasing N. Decrements growing in N
// (q > 0) point to e_N ~ -N^{1+q}; decrements falling faster than 1/N
// (q < -1) are summable.
TrendVerdict classify_trend(const std::vector<int>& N, const std::vector<double>& e);

}  // namespace bosestab
