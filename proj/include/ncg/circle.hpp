#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ncg/report.hpp"

namespace ncg {

// Real-valued function on the circle of circumference 2 pi fold, held as
// uniform samples at x_k = 2 pi fold k / size. fold records how many base
// circumferences the domain spans (1 for the base circle).
struct CircleFunction {
    int fold = 1;
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
};

// Smooth partition pair on the base circle: e1 = cos((pi/2) h),
// e2 = sin((pi/2) h) for a smooth ramp h, so e1^2 + e2^2 = 1 identically.
// Parametrizing by u in [0, 1) with the wrap at u = 0: h vanishes on
// [7/8, 1] u [0, 1/8] and equals 1 on [3/8, 5/8], so e2 is supported
// strictly inside (0, 1) and vanishes exactly at the wrap, while e1 is
// supported in the arc (5/8, 1 + 3/8) through the wrap -- strictly inside
// the window starting at u = 1/2. Each support therefore fits strictly
// inside a single period-length window.
struct PartitionPair {
    CircleFunction e1;
    CircleFunction e2;
};

// Lifts of the partition to the fold-cover: index (g, i) holds the translate
// by one base period of the window-lift of e_i; supports of distinct
// translates of one e_i are disjoint (each has width 3/4 of a period).
struct LiftedFamily {
    int fold = 1;
    std::size_t base_grid = 0;
    // functions[g][i], g in [0, fold), i in {0, 1}
    std::vector<std::vector<CircleFunction>> functions;
};

// Steepness of the exp(-beta/t) ramp; calibrated so the Fourier sup-tail of
// the partition beyond index 256 stays below 1e-9.
inline constexpr double partition_ramp_beta = 2.0;

// The smooth 0 -> 1 ramp on [0, 1] used everywhere a bump is needed.
double smooth_step(double t, double beta = partition_ramp_beta);

// Builds the canonical partition pair on a uniform grid with `grid_size`
// samples. grid_size must be even and >= 16.
PartitionPair build_partition(std::size_t grid_size);

// Start index (in base samples) of the period-length window that contains
// the support of e_i strictly in its interior; the lift cuts there.
std::size_t lift_window_offset(const PartitionPair& p, std::size_t i);

// Lifts a partition to the n-fold cover (grid n * base size).
LiftedFamily lift_to_cover(const PartitionPair& p, int fold);

// Verifies sum over the family of e_i (g e_i) = delta_{g, e} pointwise on
// the cover grid, for every deck element g. Residual is the sup over grid
// points and g of the deviation. Scaling e2 by `corrupt_scale` != 1 turns
// this into a negative control.
AxiomReport verify_circ_sum(const LiftedFamily& fam, double tolerance,
                            double corrupt_scale = 1.0);

// Fourier coefficients c_j, |j| <= cutoff, of f on its own circle; the modes
// are e^{i j x / fold} so the result feeds generator functional calculus.
std::vector<std::complex<double>>
functional_calculus_coeffs(const CircleFunction& f, int cutoff);

// Sup-norm reconstruction error of the truncated series on the grid.
double reconstruction_error(const CircleFunction& f, int cutoff);
// l1 mass of coefficients beyond `cutoff`, measured up to the grid Nyquist
// index; feeds derived completeness tolerances.
double coefficient_tail_l1(const CircleFunction& f, int cutoff);
double coefficient_tail_sup(const CircleFunction& f, int cutoff);

// Fiberwise inner product <xi, eta>(x) = sum over the fold fiber of
// conj(xi) eta; a function on the base circle (summed normalization).
CircleFunction l2_module_inner(const CircleFunction& xi,
                               const CircleFunction& eta);

// Fiber sum over the relative covering group: folds must divide f.fold and
// the output lives on the folds-fold cover.
CircleFunction descend_function(const CircleFunction& f, int folds);

} // namespace ncg
