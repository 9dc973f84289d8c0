#pragma once
// Complex DFT for arbitrary length N (radix-agnostic).  Power-of-two sizes
// use an iterative Cooley-Tukey kernel; every other size goes through
// Bluestein's chirp-z reduction to a power-of-two convolution.  The forward
// transform uses the e(-x*xi) sign convention shared by the whole library:
//
//   forward:  F[m] = sum_x f[x] * exp(-2*pi*i*m*x/N)
//   inverse:  f[x] = (1/N) * sum_m F[m] * exp(+2*pi*i*m*x/N)
//
// A deliberately naive O(N^2) reference transform is exposed for tests.

#include <vector>

#include "diomax/common.hpp"

namespace diomax {

void fft_forward(std::vector<cplx>& data);
void fft_inverse(std::vector<cplx>& data);

/// O(N^2) reference DFT (forward for sign=-1, inverse-unnormalized for +1).
std::vector<cplx> naive_dft(const std::vector<cplx>& data, int sign);

/// In-place multidimensional transform over a row-major array with the given
/// axis lengths (applies the 1-D transform along every axis).
void fft_forward_nd(std::vector<cplx>& data, const std::vector<int64_t>& shape);
void fft_inverse_nd(std::vector<cplx>& data, const std::vector<int64_t>& shape);

}  // namespace diomax
