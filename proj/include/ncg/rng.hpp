#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace ncg {

// Deterministic 64-bit generator (splitmix64). All randomized routines in the
// library take one of these explicitly so reports are reproducible across
// platforms and standard-library versions; the algorithm name below is
// embedded in report JSON.
struct SplitMix64 {
    static constexpr std::string_view name = "splitmix64/v1";

    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits of mantissa.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [-1, 1).
    double next_sym() { return 2.0 * next_unit() - 1.0; }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection-free modulo is fine here: n is tiny relative to 2^64 in
        // every call site, so the bias is far below any tolerance in play.
        return next_u64() % n;
    }

    std::int64_t next_range(std::int64_t lo, std::int64_t hi) {
        // inclusive bounds
        return lo + static_cast<std::int64_t>(
                        next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Complex with independent components uniform in [-1, 1).
    std::complex<double> next_complex() {
        double re = next_sym();
        double im = next_sym();
        return {re, im};
    }
};

} // namespace ncg
