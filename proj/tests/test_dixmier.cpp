#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ncg/dixmier.hpp"
#include "ncg/rng.hpp"

using namespace ncg;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_decreasing(SplitMix64& rng, std::size_t n) {
    std::vector<double> v(n);
    double cur = 1.0 + rng.next_unit();
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = cur;
        cur *= 0.5 + 0.499 * rng.next_unit(); // strictly decreasing, positive
    }
    return v;
}
} // namespace

TEST_CASE("singular value stream is sorted, positive and certified complete") {
    const DiracParams d{DeformationAngle{1.0}, Cx{0.0, 1.0}, 1, 1};
    const auto v = dirac_inverse_power_stream(d, 2.0, 5000);
    REQUIRE(v.size() >= 5000);
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v[i] > 0.0);
        if (i > 0) CHECK(v[i] <= v[i - 1]);
    }

    // the top of the stream is the inverse square of the smallest nonzero
    // Dirac value 2 pi |1| (four lattice modes, two spinor components each)
    const double top = 1.0 / (4.0 * kPi * kPi);
    CHECK(v[0] == doctest::Approx(top).epsilon(1e-12));
    for (int i = 1; i < 8; ++i) CHECK(v[i] == doctest::Approx(top).epsilon(1e-12));
    CHECK(v[8] < v[0] - 1e-6);

    // direct census: count lattice modes with |r + i s|^{-2}/(4 pi^2) above
    // a mid-stream threshold and compare against the stream position; the
    // threshold is placed strictly between two shells so last-ulp
    // differences between the two computations cannot flip a tie
    std::size_t next_shell = 2000;
    while (v[next_shell] >= v[2000] * (1.0 - 1e-9)) ++next_shell;
    const double thresh = std::sqrt(v[2000] * v[next_shell]);
    std::size_t census = 0;
    for (int r = -120; r <= 120; ++r)
        for (int s = -120; s <= 120; ++s) {
            if (r == 0 && s == 0) continue;
            const double mode =
                1.0 / (4.0 * kPi * kPi * (static_cast<double>(r) * r +
                                          static_cast<double>(s) * s));
            if (mode > thresh) census += 2;
        }
    std::size_t stream_above = 0;
    for (double x : v)
        if (x > thresh) ++stream_above;
    CHECK(stream_above == census);
}

TEST_CASE("anisotropic stream respects the rescaled lattice") {
    const DiracParams d{DeformationAngle{0.0}, Cx{0.5, 1.0}, 2, 3};
    const auto v = dirac_inverse_power_stream(d, 2.0, 2000);
    // smallest nonzero |r/2 + (0.5 + i) s/3| over the lattice: r = 1, s = 0
    // gives 1/2; r = 0, s = 1 gives |0.5 + i|/3 ~ 0.3727; r=-1,s=2 beats it?
    double best = 1e300;
    for (int r = -6; r <= 6; ++r)
        for (int s = -6; s <= 6; ++s) {
            if (r == 0 && s == 0) continue;
            const double m = std::hypot(r / 2.0 + 0.5 * s / 3.0, s / 3.0);
            best = std::min(best, m);
        }
    CHECK(v[0] == doctest::Approx(1.0 / (4.0 * kPi * kPi * best * best))
                      .epsilon(1e-12));
}

TEST_CASE("prefix sums and interpolation agree with direct evaluation") {
    SplitMix64 rng(0xd1c3b00cu);
    const auto v = random_decreasing(rng, 64);
    const auto p = sigma_prefix(v);
    REQUIRE(p.size() == v.size() + 1);
    CHECK(p[0] == 0.0);
    // breakpoints reproduce the partial sums bitwise
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        CHECK(p[i + 1] == acc);
        CHECK(sigma_lambda(p, v, static_cast<double>(i + 1)) == p[i + 1]);
    }
    // halfway interpolation and the sub-one ray
    CHECK(sigma_lambda(p, v, 0.5) == 0.5 * v[0]);
    CHECK(sigma_lambda(p, v, 2.5) ==
          doctest::Approx(p[2] + 0.5 * v[2]).epsilon(1e-15));
}

TEST_CASE("sigma is concave and monotone as a function of lambda") {
    SplitMix64 rng(0xa5a5a5a5u);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto v = random_decreasing(rng, 24);
        const auto p = sigma_prefix(v);
        // keep lo + hi inside the 24 available values
        const double l1 = 11.5 * rng.next_unit();
        const double l2 = 11.5 * rng.next_unit();
        const double lo = std::min(l1, l2), hi = std::max(l1, l2);

        // monotone nondecreasing
        CHECK(sigma_lambda(p, v, hi) >= sigma_lambda(p, v, lo) - 1e-15);

        // midpoint concavity
        const double mid = 0.5 * (lo + hi);
        CHECK(sigma_lambda(p, v, mid) >=
              0.5 * (sigma_lambda(p, v, lo) + sigma_lambda(p, v, hi)) - 1e-12);

        // subadditivity of the lambda-ray: sigma(a + b) <= sigma(a) + sigma(b)
        CHECK(sigma_lambda(p, v, lo + hi) <=
              sigma_lambda(p, v, lo) + sigma_lambda(p, v, hi) + 1e-12);
    }
}

TEST_CASE("log cesaro mean is exact on a constant-mean stream") {
    // values 1, 1, 1, ... give sigma(t) = t for integer t, so
    // sigma(e^w)/w... e^w is not integer, but sigma interpolates linearly;
    // on e^w >= 1 the interpolation of a constant stream is exact:
    // sigma(x) = x, hence the integrand is e^w / w and the mean is
    // (1/L) int_1^L e^w / w dw -- compare against a slow direct quadrature.
    const std::vector<double> v(4000, 1.0);
    const auto p = sigma_prefix(v);
    const double lambda = 1000.0;
    const TailMeanResult got = tail_mean(p, v, lambda, 1e-10);

    const double L = std::log(lambda);
    const int N = 200000;
    double direct = 0.0;
    for (int i = 0; i < N; ++i) {
        const double w0 = 1.0 + (L - 1.0) * i / N;
        const double w1 = 1.0 + (L - 1.0) * (i + 1) / N;
        direct += 0.5 * (std::exp(w0) / w0 + std::exp(w1) / w1) * (w1 - w0);
    }
    direct /= L;
    CHECK(got.value == doctest::Approx(direct).epsilon(1e-8));
    CHECK(got.error <= 1e-8 * std::abs(got.value));

    // a harmonic-like stream has mean ~ 1: v_k = 1/k
    std::vector<double> h(200000);
    for (std::size_t k = 0; k < h.size(); ++k)
        h[k] = 1.0 / static_cast<double>(k + 1);
    const auto hp = sigma_prefix(h);
    const TailMeanResult hm = tail_mean(hp, h, 1e5, 1e-9);
    // a single mean keeps the positive 1/ln(lambda) bias (~4.5% here);
    // cancelling it is the extrapolation's job, tested separately
    CHECK(hm.value == doctest::Approx(1.0).epsilon(5e-2));
    CHECK(hm.value > 1.0);
}

TEST_CASE("trace functional of the harmonic model is one") {
    // frozen reference: the two-decade extrapolation cancels the 1/ln
    // bias; a plain top-decade fit keeps a visible percent-level error
    std::vector<double> h(1200000);
    for (std::size_t k = 0; k < h.size(); ++k)
        h[k] = 1.0 / static_cast<double>(k + 1);
    const NcIntEstimate est = ncint_estimate(h, 1e6);
    CHECK(est.lambda_max == 1e6);
    CHECK(est.value == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(std::abs(est.fit_b) < 1.0);
}

TEST_CASE("torus trace functional matches the flat volume normalization") {
    const DiracParams d{DeformationAngle{1.0}, Cx{0.0, 1.0}, 1, 1};
    const auto v = dirac_inverse_power_stream(d, 2.0, 120000);
    const NcIntEstimate est = ncint_estimate(v, 1e5);
    // reference value 1/(2 pi) for the square torus at tau = i
    CHECK(est.value == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(5e-3));
}

TEST_CASE("trace functional scales with the covering degree") {
    const ScalingReport rep = verify_covering_scaling(
        DeformationAngle{1.0}, Cx{0.0, 1.0}, CoveringParams{2, 1, 0}, 200000,
        0.05);
    CHECK(rep.report.pass);
    CHECK(rep.expected == 2.0);
    CHECK(rep.ratio == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rep.cover_value > rep.base_value);
}

TEST_CASE("stream invariance under the lattice shear of tau") {
    // tau and tau + 1 generate the same lattice of multipliers through the
    // reindexing (r, s) -> (r + s, s), so the sorted streams must coincide
    const DiracParams a{DeformationAngle{0.0}, Cx{0.0, 1.0}, 1, 1};
    const DiracParams b{DeformationAngle{0.0}, Cx{1.0, 1.0}, 1, 1};
    const auto va = dirac_inverse_power_stream(a, 2.0, 3000);
    const auto vb = dirac_inverse_power_stream(b, 2.0, 3000);
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i)
        CHECK(va[i] == doctest::Approx(vb[i]).epsilon(1e-13));
}
