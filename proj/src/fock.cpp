#include "bosestab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bosestab/error.hpp"

namespace bosestab {

long FockBasis::count(int m, int k) {
  if (k == 0) return m == 0 ? 1 : 0;
  // C(m + k - 1, k - 1) built incrementally; exact for the sizes in use.
  long c = 1;
  for (int j = 1; j < k; ++j) c = c * (m + j) / j;
  return c;
}

FockBasis::FockBasis(int N, int d) : N_(N), d_(d) {
  if (N < 1 || d < 1) throw ValidationError("FockBasis: need N >= 1 and d >= 1");
  if (N > 255) throw ValidationError("FockBasis: N above 255 is not supported");
  size_ = count(N, d);
  if (size_ > 50'000'000) throw ValidationError("FockBasis: dimension " + std::to_string(size_) + " too large");
  before_.assign(static_cast<size_t>(d) * (N + 1) * (N + 1), 0);
  for (int i = 0; i < d; ++i)
    for (int r = 0; r <= N; ++r) {
      long acc = 0;
      // Larger n_i come first, so states with n_i > v precede.
      for (int v = r; v >= 0; --v) {
        before_[(static_cast<size_t>(i) * (N + 1) + r) * (N + 1) + v] = acc;
        acc += count(r - v, d - i - 1);
      }
    }
  occ_.resize(static_cast<size_t>(size_) * d);
  std::vector<std::uint8_t> cur(d, 0);
  cur[0] = static_cast<std::uint8_t>(N);
  for (long s = 0; s < size_; ++s) {
    std::copy(cur.begin(), cur.end(), occ_.begin() + static_cast<long>(s) * d);
    if (s + 1 == size_) break;
    // Next in decreasing lexicographic order: find the last mode j < d-1 with
    // n_j > 0, move one boson to j+1 and collect the tail there.
    int j = d - 2;
    while (cur[j] == 0) --j;
    const int tail = cur[d - 1];
    cur[d - 1] = 0;
    --cur[j];
    cur[j + 1] = static_cast<std::uint8_t>(tail + 1);
  }
}

long FockBasis::index(const std::uint8_t* n) const {
  long idx = 0;
  int r = N_;
  for (int i = 0; i < d_ - 1; ++i) {
    idx += before(i, r, n[i]);
    r -= n[i];
  }
  return idx;
}

long FockBasis::index(const std::vector<int>& n) const {
  if (static_cast<int>(n.size()) != d_) throw ValidationError("FockBasis::index: wrong length");
  std::vector<std::uint8_t> v(d_);
  int sum = 0;
  for (int i = 0; i < d_; ++i) {
    if (n[i] < 0) throw ValidationError("FockBasis::index: negative occupation");
    v[i] = static_cast<std::uint8_t>(n[i]);
    sum += n[i];
  }
  if (sum != N_) throw ValidationError("FockBasis::index: occupations do not sum to N");
  return index(v.data());
}

RemovalTable single_removal(const FockBasis& upper) {
  const int N = upper.particles(), d = upper.modes();
  if (N < 1) throw ValidationError("single_removal: N must be at least 1");
  RemovalTable t;
  t.channels = d;
  if (N == 1) {
    t.lower_size = 1;
  } else {
    t.lower_size = FockBasis::count(N - 1, d);
  }
  t.source.resize(static_cast<size_t>(t.lower_size) * d);
  t.coef.resize(t.source.size());
  std::vector<std::uint8_t> n(d);
  if (N == 1) {
    for (int i = 0; i < d; ++i) {
      std::fill(n.begin(), n.end(), 0);
      n[i] = 1;
      t.source[i] = upper.index(n.data());
      t.coef[i] = 1.0;
    }
    return t;
  }
  const FockBasis lower(N - 1, d);
  for (long s = 0; s < lower.size(); ++s) {
    const std::uint8_t* ls = lower.state(s);
    for (int i = 0; i < d; ++i) {
      std::copy(ls, ls + d, n.begin());
      ++n[i];
      const size_t at = static_cast<size_t>(s) * d + i;
      t.source[at] = upper.index(n.data());
      t.coef[at] = std::sqrt(static_cast<double>(n[i]));
    }
  }
  return t;
}

RemovalTable pair_removal(const FockBasis& upper) {
  const int N = upper.particles(), d = upper.modes();
  if (N < 2) throw ValidationError("pair_removal: N must be at least 2");
  RemovalTable t;
  t.channels = d * (d + 1) / 2;
  t.lower_size = FockBasis::count(N - 2, d);
  t.source.resize(static_cast<size_t>(t.lower_size) * t.channels);
  t.coef.resize(t.source.size());
  std::vector<std::uint8_t> n(d);
  auto fill = [&](long s, const std::uint8_t* ls) {
    for (int k = 0; k < d; ++k)
      for (int l = k; l < d; ++l) {
        std::copy(ls, ls + d, n.begin());
        // a_k a_l |n + e_k + e_l> = sqrt((n_k + 1)(n_l + 1 + delta_kl)) |n>
        const double c = std::sqrt(static_cast<double>(n[k] + 1) * (n[l] + 1 + (k == l ? 1 : 0)));
        ++n[k];
        ++n[l];
        const size_t at = static_cast<size_t>(s) * t.channels + pair_index(k, l, d);
        t.source[at] = upper.index(n.data());
        t.coef[at] = c;
      }
  };
  if (N == 2) {
    const std::vector<std::uint8_t> vac(d, 0);
    fill(0, vac.data());
    return t;
  }
  const FockBasis lower(N - 2, d);
  for (long s = 0; s < lower.size(); ++s) fill(s, lower.state(s));
  return t;
}

void save_fock_basis(const std::string& path, const FockBasis& basis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  const std::int32_t N = basis.particles(), d = basis.modes();
  const std::int64_t size = basis.size();
  out.write("BSFOCK01", 8);
  out.write(reinterpret_cast<const char*>(&N), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&size), 8);
  out.write(reinterpret_cast<const char*>(basis.state(0)), static_cast<std::streamsize>(size * d));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace bosestab
