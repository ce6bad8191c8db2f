#pragma once

#include <cstddef>
#include <vector>

#include "ncg/algebra.hpp"
#include "ncg/coverings.hpp"
#include "ncg/report.hpp"
#include "ncg/spectral_triple.hpp"

namespace ncg {

// Singular values of |D|^{-power} for the torus Dirac operator, sorted in
// decreasing order, with at least `count` entries. Enumeration runs over
// certified lattice shells: every entry returned is guaranteed to have all
// larger singular values already in the list (no boundary omissions). Each
// lattice mode contributes twice (two spinor components); the kernel mode
// is excluded.
std::vector<double> dirac_inverse_power_stream(const DiracParams& d, double power,
                                               std::size_t count);

// Running prefix sums: sigma[0] = 0, sigma[i] = v[0] + ... + v[i-1].
std::vector<double> sigma_prefix(const std::vector<double>& values);

// sigma_lambda for real lambda >= 0 by linear interpolation between integer
// partial sums; for lambda <= 1 this is lambda * ||T||.
double sigma_lambda(const std::vector<double>& prefix,
                    const std::vector<double>& values, double lambda);

// Logarithmic Cesaro mean (1/L) int_1^L sigma(e^w)/w dw with L = ln lambda,
// by composite Simpson with step halving until the estimated quadrature
// error is below rel_tol relative to the value.
struct TailMeanResult {
    double value = 0.0;
    double error = 0.0;
    int refinements = 0;
};

TailMeanResult tail_mean(const std::vector<double>& prefix,
                         const std::vector<double>& values, double lambda,
                         double rel_tol);

// Trace-functional estimate: on each of the top two decades of lambda the
// mean tail_mean(lambda) is fitted against x = 1/ln(lambda) by least
// squares; the two intercepts are extrapolated linearly in the decade mean
// of x to x = 0, cancelling the leading 1/ln(lambda) bias of a single fit.
struct NcIntEstimate {
    double value = 0.0;        // extrapolated intercept
    double fit_b = 0.0;        // top-decade slope in x
    double fit_residual = 0.0; // top-decade RMS fit residual
    double lambda_max = 0.0;
};

NcIntEstimate ncint_estimate(const std::vector<double>& values, double lambda_max);

// Ratio of the covering-triple trace functional of |D|^{-2} to the base
// one; the expected ratio is the covering degree m n.
struct ScalingReport {
    double base_value = 0.0;
    double cover_value = 0.0;
    double ratio = 0.0;
    double expected = 0.0;
    AxiomReport report;
};

ScalingReport verify_covering_scaling(DeformationAngle theta, Cx tau,
                                      const CoveringParams& c, std::size_t count,
                                      double rel_tolerance);

} // namespace ncg
