#include "ncg/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace ncg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const std::complex<double> wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

void dft_naive(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n, 0.0);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            double ang = sgn * two_pi * static_cast<double>(j * k % n) /
                         static_cast<double>(n);
            out[j] += a[k] * std::polar(1.0, ang);
        }
    }
    if (inverse) {
        for (auto& x : out) x /= static_cast<double>(n);
    }
    a = std::move(out);
}

} // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_forward(std::vector<std::complex<double>>& a) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    if (is_power_of_two(a.size()))
        fft_radix2(a, false);
    else
        dft_naive(a, false);
}

void fft_inverse(std::vector<std::complex<double>>& a) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    if (is_power_of_two(a.size()))
        fft_radix2(a, true);
    else
        dft_naive(a, true);
}

std::vector<std::complex<double>>
fourier_coefficients(const std::vector<std::complex<double>>& samples, int K) {
    const std::size_t n = samples.size();
    if (n == 0) throw std::invalid_argument("fourier_coefficients: empty grid");
    if (2 * static_cast<std::size_t>(K) + 1 > n)
        throw std::invalid_argument(
            "fourier_coefficients: grid too coarse for requested cutoff");
    std::vector<std::complex<double>> work = samples;
    fft_forward(work);
    std::vector<std::complex<double>> out(2 * static_cast<std::size_t>(K) + 1);
    for (int j = -K; j <= K; ++j) {
        std::size_t idx = static_cast<std::size_t>(
            (j + static_cast<int>(n)) % static_cast<int>(n));
        out[static_cast<std::size_t>(j + K)] =
            work[idx] / static_cast<double>(n);
    }
    return out;
}

std::vector<std::complex<double>>
fourier_evaluate(const std::vector<std::complex<double>>& coeffs,
                 std::size_t grid_size) {
    if (coeffs.size() % 2 != 1)
        throw std::invalid_argument("fourier_evaluate: need odd coefficient count");
    const int K = static_cast<int>(coeffs.size() / 2);
    if (2 * static_cast<std::size_t>(K) + 1 > grid_size)
        throw std::invalid_argument("fourier_evaluate: grid too coarse");
    std::vector<std::complex<double>> spec(grid_size, 0.0);
    for (int j = -K; j <= K; ++j) {
        std::size_t idx = static_cast<std::size_t>(
            (j + static_cast<int>(grid_size)) % static_cast<int>(grid_size));
        spec[idx] = coeffs[static_cast<std::size_t>(j + K)];
    }
    fft_inverse(spec);
    for (auto& x : spec) x *= static_cast<double>(grid_size);
    return spec;
}

} // namespace ncg
