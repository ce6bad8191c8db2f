#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ncg/algebra.hpp"
#include "ncg/report.hpp"

namespace ncg {

// Finite covering data: the covering algebra has angle
// theta' = (theta + 2 pi k) / (m n) and deck group Z_m x Z_n.
struct CoveringParams {
    int m = 1;
    int n = 1;
    int k = 0;

    int degree() const { return m * n; }
};

struct DeckElement {
    int p = 0;
    int q = 0;
};

DeformationAngle theta_prime(DeformationAngle base, const CoveringParams& c);

// Unital *-embedding of the base algebra: w(r,s) -> w(m r, n s) at theta'.
// Phase ledgers rescale by m n, which is why the homomorphism identity
// e^{-i theta'(n s1)(m r2)} = e^{-i theta s1 r2} holds symbolically.
AlgebraElement embed(const AlgebraElement& a, const CoveringParams& c);

// Deck transformation: a_{rs} -> e^{2 pi i (p r / m + q s / n)} a_{rs},
// recorded as an exact rational turn so actions compose exactly.
AlgebraElement group_act(DeckElement g, const AlgebraElement& a,
                         const CoveringParams& c);

// (1/|G|) sum_g g a = the coefficient filter keeping m | r and n | s.
AlgebraElement invariant_average(const AlgebraElement& a,
                                 const CoveringParams& c);

enum class InnerNormalization { averaged, summed };

// Module inner product <a, b> = avg_g g(a* b) pulled back along the
// embedding to an element of the base algebra at `base_theta`; the summed
// normalization multiplies by |G| = m n (the fiberwise sum convention).
// base_theta must reproduce a.theta() through theta_prime to within 1e-9.
AlgebraElement module_inner(const AlgebraElement& a, const AlgebraElement& b,
                            const CoveringParams& c, DeformationAngle base_theta,
                            InnerNormalization norm);

// Splits a covering element into (embedded part, complement): coefficient
// supports are disjoint and the two parts sum back to `a` exactly.
std::pair<AlgebraElement, AlgebraElement>
orthogonal_split(const AlgebraElement& a, const CoveringParams& c);

// sum_g g a followed by the subalgebra relabeling (m r, n s) -> (r, s);
// equals |G| times the invariant average, pulled back to `base_theta`.
AlgebraElement descend(const AlgebraElement& a, const CoveringParams& c,
                       DeformationAngle base_theta);

// Completeness of the canonical covering family: partition lifts
// e_(g,i) of the two circle bumps in each generator direction, with
//   sum_iota e'_iota (g e_iota) = delta_{g,e} 1.
// The sum is evaluated through its exact u/v factorization; coefficients
// that the factorization proves below an explicit tiling bound contribute
// that bound to the residual instead of an exact value.
struct CompletenessReport {
    AxiomReport report;
    double derived_tolerance = 0.0; // from measured Fourier tails
    bool cutoff_warning = false;    // requested tolerance below derived
    double tail_l1_u = 0.0;
    double tail_l1_v = 0.0;
};

CompletenessReport verify_covering_completeness(DeformationAngle base,
                                                const CoveringParams& c,
                                                int cutoff,
                                                std::size_t grid_per_fold,
                                                double requested_tolerance);

// Tower of iterated coverings: theta_j = (theta_{j-1} + 2 pi k_j)/(m_j n_j).
struct TowerLevel {
    int m = 1;
    int n = 1;
    int k = 0;
};

struct TowerSpec {
    double theta0 = 0.0;
    std::vector<TowerLevel> levels;

    std::size_t depth() const { return levels.size(); }
};

// Cumulative covering data from the base to `level`: total folds and the
// accumulated integer turn count, so theta_at is a single division.
struct TowerCumulative {
    std::int64_t m = 1;
    std::int64_t n = 1;
    std::int64_t turns = 0;
};

TowerCumulative cumulative_at(const TowerSpec& t, std::size_t level);
DeformationAngle theta_at(const TowerSpec& t, std::size_t level);

// Finite prefix of a coherent sequence: elements[j] lives at theta_at(j).
// When the prefix was built from separable (u-series x v-series) data the
// factors are retained; inner-product trajectories then evaluate through
// the factorization instead of quadratic products.
struct SeparableFactors {
    std::vector<Cx> u; // coefficients u_offset..  (index j -> power j - radius)
    std::vector<Cx> v;
    std::int64_t u_radius = 0;
    std::int64_t v_radius = 0;
};

struct CoherentPrefix {
    TowerSpec tower;
    std::vector<AlgebraElement> elements; // size depth() + 1
    std::vector<SeparableFactors> factors; // empty, or size depth() + 1
};

// Builds the canonical coherent prefix from the circle partition: at level
// j the element is e^{M_j}_{iu}(u_j) e^{N_j}_{iv}(v_j) with per-level
// cutoffs M_j * base_cutoff and N_j * base_cutoff, so descent aligns level
// to level exactly. iu, iv select which bump (0 or 1) each factor uses.
CoherentPrefix make_partition_prefix(const TowerSpec& t, int base_cutoff,
                                     std::size_t grid_per_fold, int iu, int iv);

// Residual of elements[j] against descend(elements[j+1]) for each adjacent
// pair, in the coefficient sup-norm.
struct LevelResidual {
    std::size_t upper_level = 0; // the element that was descended
    double residual = 0.0;
    bool pass = false;
};

struct CoherenceReport {
    std::vector<LevelResidual> links;
    double max_residual = 0.0;
    bool pass = false;
};

CoherenceReport coherence_check(const CoherentPrefix& p, double tolerance);

// Inner-product trajectory <a_j, b_j> relative to the base algebra, in both
// normalizations, with successive-difference sup norms as the convergence
// diagnostic. Entries are base-algebra elements at theta0.
struct InnerTrajectory {
    std::vector<AlgebraElement> averaged;
    std::vector<AlgebraElement> summed;
    std::vector<double> averaged_steps;
    std::vector<double> summed_steps;
};

InnerTrajectory limit_inner_estimate(const CoherentPrefix& p,
                                     const CoherentPrefix& q);

} // namespace ncg
