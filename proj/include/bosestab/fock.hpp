#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bosestab {

// Occupation-number basis of N bosons in d modes, in decreasing
// lexicographic order: index 0 is (N, 0, ..., 0).
class FockBasis {
 public:
  FockBasis(int N, int d);

  int particles() const { return N_; }
  int modes() const { return d_; }
  long size() const { return size_; }

  // Occupation n_i of state s.
  int occupation(long s, int i) const { return occ_[static_cast<size_t>(s) * d_ + i]; }
  const std::uint8_t* state(long s) const { return occ_.data() + static_cast<size_t>(s) * d_; }
  // Inverse of the enumeration; occupations must sum to N.
  long index(const std::uint8_t* n) const;
  long index(const std::vector<int>& n) const;

  // Number of ways to place m bosons in k modes, C(m + k - 1, m).
  static long count(int m, int k);

 private:
  int N_, d_;
  long size_;
  std::vector<std::uint8_t> occ_;
  // before_[i][r][v]: states that precede, among those with r bosons left
  // for modes i.., the first one with n_i = v.
  std::vector<long> before_;
  long before(int i, int r, int v) const { return before_[(static_cast<size_t>(i) * (N_ + 1) + r) * (N_ + 1) + v]; }
};

// Annihilation into the (N - m)-particle basis: for lower state s and channel
// c, (a psi)_s = coef[s * channels + c] * psi[source[s * channels + c]].
// Channels are modes i (single removal, a_i) or unordered pairs k <= l in
// pair_index order (pair removal, a_k a_l).
struct RemovalTable {
  long lower_size = 0;
  int channels = 0;
  std::vector<long> source;
  std::vector<double> coef;
};

RemovalTable single_removal(const FockBasis& upper);
RemovalTable pair_removal(const FockBasis& upper);

// Position of the unordered pair {k, l} among d(d+1)/2 pairs ordered
// (0,0), (0,1), ..., (0,d-1), (1,1), ...
inline int pair_index(int k, int l, int d) {
  if (k > l) std::swap(k, l);
  return k * d - k * (k - 1) / 2 + (l - k);
}

// Binary layout: "BSFOCK01", i32 N, i32 d, i64 size, then size * d u8
// occupations in enumeration order.
void save_fock_basis(const std::string& path, const FockBasis& basis);

}  // namespace bosestab
