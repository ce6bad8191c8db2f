#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ncg/algebra.hpp"
#include "ncg/report.hpp"
#include "ncg/rng.hpp"

namespace ncg {

// Truncation window for GNS-space computations. Operators are compressed to
// coefficient support |r|,|s| <= radius; norm estimates feed in vectors
// supported on the interior |r|,|s| <= radius - guard, so that one operator
// application cannot push interior data past the truncation edge.
struct GnsWindow {
    std::int64_t radius = 16;
    std::int64_t guard = 0;

    std::int64_t interior() const { return radius - guard; }
};

// Element of H = L2(A) (+) L2(A); both components share the same angle.
struct SpinorVector {
    AlgebraElement up;
    AlgebraElement down;
};

// Stacked spinors C^{2^s} (x) H for the iterated representations.
using SpinorStack = std::vector<SpinorVector>;

// Dirac data: d = delta1/m + tau * delta2/n acting as the multiplier
// 2 pi i (r/m + tau s/n) on w(r,s). Im(tau) must be nonzero.
struct DiracParams {
    DeformationAngle theta;
    Cx tau{0.0, 1.0};
    int m = 1;
    int n = 1;
};

struct LinearMapHandle {
    std::string label;
    std::size_t stack_size = 1; // spinor components the map expects
    std::function<SpinorStack(const SpinorStack&)> apply;
    std::function<SpinorStack(const SpinorStack&)> apply_adjoint;
};

struct NormEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

SpinorVector zero_spinor(DeformationAngle theta);
double stack_norm(const SpinorStack& x);
Cx stack_inner(const SpinorStack& x, const SpinorStack& y);
SpinorStack scale_stack(const SpinorStack& x, Cx c);
SpinorStack add_stacks(const SpinorStack& x, const SpinorStack& y);
SpinorStack sub_stacks(const SpinorStack& x, const SpinorStack& y);
SpinorStack truncate_stack(const SpinorStack& x, std::int64_t radius);
SpinorStack interior_project(const SpinorStack& x, const GnsWindow& w);

// Dense random spinor supported on the interior box, both components.
SpinorVector random_interior_spinor(DeformationAngle theta, const GnsWindow& w,
                                    SplitMix64& rng);

// Left regular representation pi(a), compressed to the window. Requires
// support_radius(a) <= w.guard so interior vectors never reach the edge.
LinearMapHandle represent(const AlgebraElement& a, const GnsWindow& w);

// Right multiplication xi -> xi b on both components (the analytic form of
// J pi(b*) J^{-1}; the literal conjugated composition is j_conjugate below).
LinearMapHandle right_represent(const AlgebraElement& b, const GnsWindow& w);

SpinorVector dirac_apply(const SpinorVector& x, const DiracParams& d);
LinearMapHandle dirac_handle(const DiracParams& d, const GnsWindow& w);

// Charge conjugation J (antilinear, J^2 = -1, J^{-1} = -J) and grading.
SpinorVector j_apply(const SpinorVector& x);
SpinorVector j_inverse_apply(const SpinorVector& x);
SpinorVector gamma_apply(const SpinorVector& x);

// J pi(b) J^{-1} assembled literally from the three maps above.
LinearMapHandle j_conjugate_represent(const AlgebraElement& b, const GnsWindow& w);

// [D, pi(a)] with adjoint -[D, pi(a*)].
LinearMapHandle commutator_with_dirac(const AlgebraElement& a, const DiracParams& d,
                                      const GnsWindow& w);

// Largest singular value of the interior compression of h, by power
// iteration on h* h. Deterministic given the rng state. A positive
// `below_is_enough` lets the iteration stop once the estimate sits below
// that threshold (used when only "is it negligible?" matters).
NormEstimate op_norm_estimate(const LinearMapHandle& h, DeformationAngle theta,
                              const GnsWindow& w, int max_iterations,
                              SplitMix64& rng, double below_is_enough = 0.0);

// || [[D, pi(a)], J pi(b*) J^{-1}] || -- zero for a commuting covering pair.
AxiomReport check_first_order(const AlgebraElement& a, const AlgebraElement& b,
                              const DiracParams& d, const GnsWindow& w,
                              double tolerance, SplitMix64& rng);

// || [pi(a), J pi(b) J^{-1}] || -- the commutant condition for J.
AxiomReport check_real_structure(const AlgebraElement& a, const AlgebraElement& b,
                                 const DiracParams& d, const GnsWindow& w,
                                 double tolerance, SplitMix64& rng);

// Sign table for KO-dimension 2: J^2 = -1, J D = D J, J Gamma = -Gamma J,
// plus Gamma^2 = 1 and Gamma D = -D Gamma. Antilinear residuals are
// estimated by an interior basis sweep plus seeded random probes (a lower
// bound for the true operator norm; exact cancellation makes it ~1e-15).
std::vector<AxiomReport> check_sign_table(const DiracParams& d, const GnsWindow& w,
                                          double tolerance, int probes,
                                          SplitMix64& rng);

// Dirac spectrum on the window: for each |r|,|s| <= radius the pair
// +-2pi|r/m + tau s/n| (the origin contributes 0 twice). `analytic` uses
// that closed form; `matrix` assembles the per-mode 2x2 block and solves
// its characteristic polynomial. Values are sorted; exactly equal values
// merge into one entry with summed multiplicity.
struct SpectralPoint {
    double value = 0.0;
    int multiplicity = 0;
};

enum class SpectrumRoute { analytic, matrix };

std::vector<SpectralPoint> dirac_spectrum(const DiracParams& d, std::int64_t radius,
                                          SpectrumRoute route);

// Largest pointwise gap between the multiplicity-expanded, sorted value lists
// of two spectra. Multiplicity grouping is a presentation detail (bitwise-equal
// neighbours get merged), so the comparison must expand it back out.
double spectrum_cross_residual(const std::vector<SpectralPoint>& a,
                               const std::vector<SpectralPoint>& b);

// Iterated regularity representation
//   pi^{s+1}(a) = [[pi^s(a), 0], [[|D_s|, pi^s(a)], pi^s(a)]]
// on 2^s stacked spinors, and the seminorm ||pi^s(a)||. s <= 4. The ladder
// commutes with |D| (scalar multiplier): commutators with D itself stop
// being bounded at the second level because the off-diagonal blocks of D
// turn the iterated commutator into an anticommutator of derivations.
LinearMapHandle pi_s_representation(const AlgebraElement& a, int s,
                                    const DiracParams& d, const GnsWindow& w);

NormEstimate seminorm(const AlgebraElement& a, int s, const DiracParams& d,
                      const GnsWindow& w, int max_iterations, SplitMix64& rng);

// Commutative local picture (theta = 0) on sample grids: base torus grid
// P x P over [0,1)^2, covering grid mP x nP over [0,m) x [0,n). phi is
// periodization over the deck translates (exact index shifts). Checks:
//   - deck translates of window-supported functions are orthogonal (exact),
//   - the translated windows tile the covering grid (exact reconstruction),
//   - phi is isometric for window-supported functions under the summed
//     fiber inner product (exact),
//   - phi intertwines the covering Dirac multiplier with the base one on a
//     smooth window bump (limited by Fourier leakage of the bump).
struct LocalCoveringReport {
    AxiomReport orthogonality;
    AxiomReport tiling;
    AxiomReport isometry;
    AxiomReport intertwining;
    bool pass = false;
};

LocalCoveringReport local_covering_check_theta0(int m, int n, std::size_t grid,
                                                Cx tau, double exact_tolerance,
                                                double intertwine_tolerance);

} // namespace ncg
