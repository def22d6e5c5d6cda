#pragma once

#include "kato/grid.hpp"

#include <vector>

namespace kato {

// Raw unnormalised in-place transforms over a row-major block with the
// given per-axis extents.  sign = -1 is e^{-i...}, +1 is e^{+i...}.
void fft_inplace(cplx* data, const std::vector<int>& dims, int sign);


// Continuous-convention transforms on the torus grid:
//   dft:  fhat(xi_k) = sum_j dx^n e^{-i x_j . xi_k} f(x_j)
//   idft: f(x_j)    = L^{-n} sum_k e^{+i x_j . xi_k} fhat(xi_k)
// i.e. the inverse carries (2 pi)^{-n} times the frequency cell volume.
Field dft(const Field& f);
Field idft(const Field& fhat);

// In-place variants on raw grid-sized buffers.
void dft_inplace(const Grid& g, cplx* data);
void idft_inplace(const Grid& g, cplx* data);

}  // namespace kato
