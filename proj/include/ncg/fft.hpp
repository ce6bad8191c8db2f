#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ncg {

// In-place radix-2 FFT for power-of-two sizes, with a naive O(n^2) DFT
// fallback for other lengths. Sign convention: forward transform uses
// e^{-2 pi i jk/n}; inverse divides by n.
void fft_forward(std::vector<std::complex<double>>& a);
void fft_inverse(std::vector<std::complex<double>>& a);

bool is_power_of_two(std::size_t n);

// Fourier coefficient c_j, j in [-K, K], of samples f on a uniform grid of
// the circle [0, L): c_j = (1/N) sum_k f_k e^{-i j (2 pi / L) x_k} with
// x_k = k L / N. Row-major output ordered j = -K..K.
std::vector<std::complex<double>>
fourier_coefficients(const std::vector<std::complex<double>>& samples, int K);

// Evaluate sum_{j=-K}^{K} c_j e^{i j (2 pi/L) x_k} back on the same grid.
std::vector<std::complex<double>>
fourier_evaluate(const std::vector<std::complex<double>>& coeffs,
                 std::size_t grid_size);

} // namespace ncg
