#pragma once

#include <complex>
#include <string>
#include <vector>

#include "bosestab/interaction.hpp"
#include "bosestab/modes.hpp"

namespace bosestab {

// W_ijkl = int int conj(phi_i(x)) conj(phi_j(y)) w_N(x - y) phi_k(x) phi_l(y).
struct TwoBodyTensor {
  int d = 0;
  std::vector<std::complex<double>> data;  // index ((i d + j) d + k) d + l

  std::complex<double>& operator()(int i, int j, int k, int l) { return data[((static_cast<size_t>(i) * d + j) * d + k) * d + l]; }
  const std::complex<double>& operator()(int i, int j, int k, int l) const {
    return data[((static_cast<size_t>(i) * d + j) * d + k) * d + l];
  }
  // max |W_ijkl - W_jilk|; max of |W_ijkl - conj(W_klij)| and |W_ijkl - conj(W_lkji)|.
  double exchange_asymmetry() const;
  double hermiticity_defect() const;
  double max_imag() const;
};

// One spectral convolution per pair density conj(phi_j) phi_l, then a grid
// contraction. Requires the scaled interaction to be resolved on the grid.
TwoBodyTensor two_body_elements(const ModeBasis& basis, const InteractionSpec& w, int N, double beta);

// Restriction to the leading d' modes.
TwoBodyTensor leading(const TwoBodyTensor& W, int d_small);

// Binary layout: "BSTWOB01", i32 d, then d^4 (re, im) f64 pairs in index order.
void save_two_body(const std::string& path, const TwoBodyTensor& W);

}  // namespace bosestab
