// SPDX-License-Identifier: Apache-2.0
//
// Self-contained complex FFT used by the CIR extraction path. Power-of-two
// lengths run through an iterative radix-2 transform with a precomputed
// twiddle table; every other length goes through Bluestein's chirp-z
// algorithm on top of it. Plans are cached per length and shared read-only,
// so transforms are safe to run concurrently and results do not depend on the
// caller's thread count.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace riscav::fft {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n);

// In-place forward (sign = -1) or inverse (sign = +1) DFT, n a power of two.
// The inverse applies the 1/n normalization.
void transform_pow2(std::vector<Complex>& data, int sign);

// Inverse DFT of arbitrary length: out[j] = (1/n) * sum_k in[k] e^{+2 pi i jk/n}
// where n = out_length and in is implicitly zero-padded to n.
std::vector<Complex> inverse_dft(const std::vector<Complex>& in, std::size_t out_length);

} // namespace riscav::fft
