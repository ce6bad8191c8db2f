#include "ncg/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncg/fft.hpp"

namespace ncg {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<std::complex<double>> to_complex(const std::vector<double>& v) {
    return {v.begin(), v.end()};
}

} // namespace

double smooth_step(double t, double beta) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-beta / t);
    double b = std::exp(-beta / (1.0 - t));
    return a / (a + b);
}

PartitionPair build_partition(std::size_t grid_size) {
    if (grid_size < 16 || grid_size % 2 != 0)
        throw std::invalid_argument("build_partition: grid must be even and >= 16");
    PartitionPair p;
    p.e1.fold = 1;
    p.e2.fold = 1;
    p.e1.samples.resize(grid_size);
    p.e2.samples.resize(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        // circle coordinate u in [0, 1); the wrap point is u = 0
        const double u = static_cast<double>(k) / static_cast<double>(grid_size);
        double h;
        if (u <= 0.125) {
            h = 0.0;
        } else if (u < 0.375) {
            h = smooth_step((u - 0.125) * 4.0); // rising transition
        } else if (u <= 0.625) {
            h = 1.0;
        } else if (u < 0.875) {
            h = 1.0 - smooth_step((u - 0.625) * 4.0); // falling transition
        } else {
            h = 0.0;
        }
        // e1^2 + e2^2 = 1 pointwise; e1 lives around the wrap (support
        // strictly inside the half-shifted window), e2 in the middle
        // (support strictly inside (0, 1)), and e2 vanishes identically on
        // [7/8, 1] u [0, 1/8] -- in particular exactly at the wrap.
        // cos(pi/2) under a rounded pi/2 is ~6e-17, not 0; snap the exact
        // plateau so the support statements above hold literally
        p.e1.samples[k] = h == 1.0 ? 0.0 : std::cos(0.5 * pi * h);
        p.e2.samples[k] = std::sin(0.5 * pi * h);
    }
    return p;
}

std::size_t lift_window_offset(const PartitionPair& p, std::size_t i) {
    // e1's support crosses the wrap, so its lift window starts half a
    // period in; e2's support sits strictly inside the unshifted window.
    return i == 0 ? p.e1.size() / 2 : 0;
}

LiftedFamily lift_to_cover(const PartitionPair& p, int fold) {
    if (fold < 1) throw std::invalid_argument("lift_to_cover: fold must be >= 1");
    if (p.e1.size() != p.e2.size() || p.e1.size() == 0)
        throw std::invalid_argument("lift_to_cover: malformed partition");
    const std::size_t P = p.e1.size();
    const std::size_t total = P * static_cast<std::size_t>(fold);
    LiftedFamily fam;
    fam.fold = fold;
    fam.base_grid = P;
    fam.functions.assign(static_cast<std::size_t>(fold), {});

    // Window lift: each e_i appears once per deck translate, supported in a
    // single period-length window whose start is chosen so the support sits
    // strictly inside it (no cut at the window edge). Translates are exact
    // index shifts by g P, so every cover index c carries e_i(c mod P) in
    // exactly one translate.
    const std::vector<double>* base[2] = {&p.e1.samples, &p.e2.samples};
    for (int g = 0; g < fold; ++g) {
        auto& pair_fns = fam.functions[static_cast<std::size_t>(g)];
        pair_fns.assign(2, CircleFunction{fold, std::vector<double>(total, 0.0)});
        for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t offset = lift_window_offset(p, i);
            for (std::size_t k = 0; k < P; ++k) {
                const std::size_t idx =
                    (offset + static_cast<std::size_t>(g) * P + k) % total;
                pair_fns[i].samples[idx] = (*base[i])[(offset + k) % P];
            }
        }
    }
    return fam;
}

AxiomReport verify_circ_sum(const LiftedFamily& fam, double tolerance,
                            double corrupt_scale) {
    const std::size_t P = fam.base_grid;
    const std::size_t total = P * static_cast<std::size_t>(fam.fold);
    double residual = 0.0;
    std::vector<double> acc(total);
    for (int g = 0; g < fam.fold; ++g) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const std::size_t shift = static_cast<std::size_t>(g) * P;
        for (const auto& pair_fns : fam.functions) {
            for (std::size_t i = 0; i < 2; ++i) {
                const auto& f = pair_fns[i].samples;
                double scl = (i == 1) ? corrupt_scale : 1.0;
                for (std::size_t k = 0; k < total; ++k)
                    acc[k] += scl * scl * f[k] * f[(k + shift) % total];
            }
        }
        const double target = (g == 0) ? 1.0 : 0.0;
        for (double v : acc) residual = std::max(residual, std::abs(v - target));
    }
    AxiomReport r = make_report("circle-cover-completeness", residual, tolerance,
                                static_cast<int>(P), 0);
    return r;
}

std::vector<std::complex<double>>
functional_calculus_coeffs(const CircleFunction& f, int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
    return fourier_coefficients(to_complex(f.samples), cutoff);
}

double reconstruction_error(const CircleFunction& f, int cutoff) {
    auto coeffs = functional_calculus_coeffs(f, cutoff);
    auto back = fourier_evaluate(coeffs, f.size());
    double err = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        err = std::max(err, std::abs(back[k] - f.samples[k]));
    return err;
}

namespace {

double tail_accumulate(const CircleFunction& f, int cutoff, bool sup) {
    const int nyquist = static_cast<int>(f.size() / 2) - 1;
    if (cutoff >= nyquist) return 0.0;
    auto all = fourier_coefficients(to_complex(f.samples), nyquist);
    double acc = 0.0;
    for (int j = -nyquist; j <= nyquist; ++j) {
        if (std::abs(j) <= cutoff) continue;
        double mag = std::abs(all[static_cast<std::size_t>(j + nyquist)]);
        acc = sup ? std::max(acc, mag) : acc + mag;
    }
    return acc;
}

} // namespace

double coefficient_tail_l1(const CircleFunction& f, int cutoff) {
    return tail_accumulate(f, cutoff, false);
}

double coefficient_tail_sup(const CircleFunction& f, int cutoff) {
    return tail_accumulate(f, cutoff, true);
}

CircleFunction l2_module_inner(const CircleFunction& xi,
                               const CircleFunction& eta) {
    if (xi.fold != eta.fold || xi.size() != eta.size())
        throw std::invalid_argument("l2_module_inner: mismatched covers");
    if (xi.size() % static_cast<std::size_t>(xi.fold) != 0)
        throw std::invalid_argument("l2_module_inner: grid not divisible by fold");
    const std::size_t P = xi.size() / static_cast<std::size_t>(xi.fold);
    CircleFunction out;
    out.fold = 1;
    out.samples.assign(P, 0.0);
    for (std::size_t k = 0; k < P; ++k) {
        double acc = 0.0;
        for (int t = 0; t < xi.fold; ++t) {
            std::size_t idx = k + static_cast<std::size_t>(t) * P;
            acc += xi.samples[idx] * eta.samples[idx];
        }
        out.samples[k] = acc;
    }
    return out;
}

CircleFunction descend_function(const CircleFunction& f, int folds) {
    if (folds < 1 || f.fold % folds != 0)
        throw std::invalid_argument(
            "descend_function: target fold must divide the source fold");
    if (f.size() % static_cast<std::size_t>(f.fold) != 0)
        throw std::invalid_argument("descend_function: grid not divisible by fold");
    const std::size_t P = f.size() / static_cast<std::size_t>(f.fold);
    const int rel = f.fold / folds;
    const std::size_t out_len = P * static_cast<std::size_t>(folds);
    CircleFunction out;
    out.fold = folds;
    out.samples.assign(out_len, 0.0);
    for (std::size_t k = 0; k < out_len; ++k) {
        double acc = 0.0;
        for (int t = 0; t < rel; ++t)
            acc += f.samples[k + static_cast<std::size_t>(t) * out_len];
        out.samples[k] = acc;
    }
    return out;
}

} // namespace ncg
