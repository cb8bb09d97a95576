#pragma once

#include <span>
#include <vector>

#include "dirlab/core.hpp"

namespace dirlab {

// In-place DFT, X_k = sum_j x_j e^{-2 pi i jk/n}. Unnormalized.
void fft_forward(std::span<Complex> data);
// In-place inverse DFT, x_j = sum_k X_k e^{+2 pi i jk/n}. Unnormalized.
void fft_inverse(std::span<Complex> data);

// Values of sum_m c_m r^m z^m at z = r e^{2 pi i j/M}, j = 0..M-1. Exact: the
// powers are folded modulo M before a single inverse transform.
std::vector<Complex> evaluate_on_ring(std::span<const Complex> coeffs, double r, int M);

}  // namespace dirlab
