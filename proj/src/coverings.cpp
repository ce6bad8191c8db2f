#include "ncg/coverings.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ncg/circle.hpp"
#include "ncg/fft.hpp"

namespace ncg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_covering(const CoveringParams& c) {
    if (c.m < 1 || c.n < 1) throw std::invalid_argument("covering folds must be >= 1");
    if (c.k < 0) throw std::invalid_argument("covering charge must be >= 0");
}

// Gate used where an element's angle must match theta'(base): the two are
// computed along different floating paths, so this is a relative check,
// unlike the bitwise compare used for in-level arithmetic.
void require_theta_consistent(DeformationAngle base, const CoveringParams& c,
                              DeformationAngle cover) {
    const double expect = theta_prime(base, c).radians;
    const double scale = std::max({1.0, std::abs(expect), std::abs(cover.radians)});
    if (std::abs(expect - cover.radians) > 1e-9 * scale)
        throw std::invalid_argument("element angle does not match theta'(base) for this covering");
}

bool divisible(std::int64_t v, std::int64_t d) { return d == 0 ? v == 0 : v % d == 0; }

// Pulls one invariant-support term down to the base algebra. Ledger phase
// counts divide through by m n exactly when possible (then the 2 pi k part
// is an integer number of turns and drops); otherwise the amplitude is
// evaluated at theta' and stored with a trivial ledger.
void pull_back_term(AlgebraElement& dst, DeformationAngle cover_theta,
                    const CoveringParams& c, MonomialIndex idx, const Term& t,
                    Cx scale) {
    const std::int64_t fold = static_cast<std::int64_t>(c.m) * c.n;
    MonomialIndex base_idx{idx.r / c.m, idx.s / c.n};
    if (divisible(t.phase.k, fold)) {
        TwistPhase ph = TwistPhase::theta_units(t.phase.k / fold)
                            .composed(TwistPhase::turns(t.phase.turn_num, t.phase.turn_den));
        dst.accumulate(base_idx, scale * t.c, ph);
    } else {
        dst.accumulate(base_idx, scale * t.amplitude(cover_theta), TwistPhase{});
    }
}

} // namespace

DeformationAngle theta_prime(DeformationAngle base, const CoveringParams& c) {
    require_covering(c);
    return DeformationAngle{(base.radians + two_pi * c.k) / (static_cast<double>(c.m) * c.n)};
}

AlgebraElement embed(const AlgebraElement& a, const CoveringParams& c) {
    require_covering(c);
    const std::int64_t fold = static_cast<std::int64_t>(c.m) * c.n;
    AlgebraElement out = zero_element(theta_prime(a.theta(), c));
    for (const auto& [idx, t] : a.terms()) {
        TwistPhase ph = TwistPhase::theta_units(t.phase.k * fold)
                            .composed(TwistPhase::turns(t.phase.turn_num, t.phase.turn_den));
        out.accumulate(MonomialIndex{idx.r * c.m, idx.s * c.n}, t.c, ph);
    }
    return out;
}

AlgebraElement group_act(DeckElement g, const AlgebraElement& a,
                         const CoveringParams& c) {
    require_covering(c);
    AlgebraElement out = zero_element(a.theta());
    for (const auto& [idx, t] : a.terms()) {
        // turn fraction (p r / m + q s / n) as an exact rational
        const std::int64_t num = static_cast<std::int64_t>(g.p) * idx.r * c.n +
                                 static_cast<std::int64_t>(g.q) * idx.s * c.m;
        TwistPhase ph = t.phase.composed(
            TwistPhase::turns(num, static_cast<std::int64_t>(c.m) * c.n));
        out.accumulate(idx, t.c, ph);
    }
    return out;
}

AlgebraElement invariant_average(const AlgebraElement& a, const CoveringParams& c) {
    require_covering(c);
    AlgebraElement out = zero_element(a.theta());
    for (const auto& [idx, t] : a.terms())
        if (divisible(idx.r, c.m) && divisible(idx.s, c.n))
            out.accumulate(idx, t.c, t.phase);
    return out;
}

AlgebraElement module_inner(const AlgebraElement& a, const AlgebraElement& b,
                            const CoveringParams& c, DeformationAngle base_theta,
                            InnerNormalization norm) {
    require_covering(c);
    require_theta_consistent(base_theta, c, a.theta());
    AlgebraElement prod = normal_order_product(adjoint(a), b);
    const double factor = norm == InnerNormalization::summed
                              ? static_cast<double>(c.m) * c.n
                              : 1.0;
    AlgebraElement out = zero_element(base_theta);
    for (const auto& [idx, t] : prod.terms())
        if (divisible(idx.r, c.m) && divisible(idx.s, c.n))
            pull_back_term(out, prod.theta(), c, idx, t, Cx{factor, 0.0});
    return out;
}

std::pair<AlgebraElement, AlgebraElement>
orthogonal_split(const AlgebraElement& a, const CoveringParams& c) {
    require_covering(c);
    AlgebraElement inv = zero_element(a.theta());
    AlgebraElement rest = zero_element(a.theta());
    for (const auto& [idx, t] : a.terms()) {
        auto& dst = (divisible(idx.r, c.m) && divisible(idx.s, c.n)) ? inv : rest;
        dst.accumulate(idx, t.c, t.phase);
    }
    return {std::move(inv), std::move(rest)};
}

AlgebraElement descend(const AlgebraElement& a, const CoveringParams& c,
                       DeformationAngle base_theta) {
    require_covering(c);
    require_theta_consistent(base_theta, c, a.theta());
    const double factor = static_cast<double>(c.m) * c.n;
    AlgebraElement out = zero_element(base_theta);
    for (const auto& [idx, t] : a.terms())
        if (divisible(idx.r, c.m) && divisible(idx.s, c.n))
            pull_back_term(out, a.theta(), c, idx, t, Cx{factor, 0.0});
    return out;
}

// ---------------------------------------------------------------------------
// Covering completeness
// ---------------------------------------------------------------------------

namespace {

// Fourier coefficients (modes -cutoff..cutoff) of one lifted bump, taken
// from the deck-trivial window of an m-fold lift, plus tail measurements of
// what the truncation discards.
struct BumpSeries {
    std::vector<Cx> coeff; // size 2*cutoff+1
    double tail_l1 = 0.0;
    double tail_sup = 0.0;
};

std::vector<Cx> complex_samples(const std::vector<double>& real_samples) {
    std::vector<Cx> out(real_samples.size());
    for (std::size_t i = 0; i < real_samples.size(); ++i)
        out[i] = Cx{real_samples[i], 0.0};
    return out;
}

BumpSeries bump_series(const CircleFunction& lifted, int cutoff) {
    BumpSeries out;
    out.coeff = fourier_coefficients(complex_samples(lifted.samples), cutoff);
    out.tail_l1 = coefficient_tail_l1(lifted, cutoff);
    out.tail_sup = coefficient_tail_sup(lifted, cutoff);
    return out;
}

// c(J) = fold * [fold | J] * sum_i sum_{j+j'=J} a_j a_{j'} e^{2 pi i p j'/fold}
// -- the deck-translate sum collapses to the divisibility filter, so only
// the residues J = fold * t are ever nonzero. Returned indexed by
// J = -2K .. 2K (size 4K+1), with the filter applied literally.
std::vector<Cx> family_correlation(const std::vector<BumpSeries>& bumps, int fold,
                                   int p, int cutoff) {
    const int K = cutoff;
    std::vector<Cx> out(4 * K + 1, Cx{0.0, 0.0});
    std::vector<Cx> act(2 * K + 1);
    for (int jp = -K; jp <= K; ++jp) {
        const double turn = two_pi * p * jp / fold;
        act[jp + K] = Cx{std::cos(turn), std::sin(turn)};
    }
    for (const auto& b : bumps) {
        for (int j = -K; j <= K; ++j) {
            const Cx cj = b.coeff[j + K];
            if (cj == Cx{0.0, 0.0}) continue;
            for (int jp = -K; jp <= K; ++jp)
                out[j + jp + 2 * K] += cj * b.coeff[jp + K] * act[jp + K];
        }
    }
    for (int J = -2 * K; J <= 2 * K; ++J)
        if (J % fold != 0) out[J + 2 * K] = Cx{0.0, 0.0};
    for (auto& v : out) v *= static_cast<double>(fold);
    return out;
}

// Tiling bound sup_t sum_{g,i} |e^K_{g,i}(t)|^2 evaluated from the truncated
// series on the sampling grid; by Cauchy-Schwarz it dominates every
// |V(L; J)| regardless of the rotation angle theta' J.
double tiling_bound(const std::vector<BumpSeries>& bumps, int fold,
                    std::size_t grid_per_fold) {
    const std::size_t total = grid_per_fold * static_cast<std::size_t>(fold);
    std::vector<double> window(total, 0.0);
    for (const auto& b : bumps) {
        auto samples = fourier_evaluate(b.coeff, total);
        for (std::size_t i = 0; i < total; ++i) window[i] += std::norm(samples[i]);
    }
    // translate sum: the deck copies are exact index shifts of the window
    double sup = 0.0;
    for (std::size_t i = 0; i < grid_per_fold; ++i) {
        double acc = 0.0;
        for (int g = 0; g < fold; ++g)
            acc += window[(i + g * grid_per_fold) % total];
        sup = std::max(sup, acc);
    }
    return sup;
}

} // namespace

CompletenessReport verify_covering_completeness(DeformationAngle base,
                                                const CoveringParams& c,
                                                int cutoff,
                                                std::size_t grid_per_fold,
                                                double requested_tolerance) {
    require_covering(c);
    if (cutoff < 4) throw std::invalid_argument("completeness cutoff must be >= 4");
    // cutoff counts modes per fold (like grid_per_fold counts samples per
    // fold): a lifted window bump needs fold times the base resolution.
    const int Ku = c.m * cutoff;
    const int Kv = c.n * cutoff;

    PartitionPair part = build_partition(grid_per_fold);
    LiftedFamily fam_u = lift_to_cover(part, c.m);
    LiftedFamily fam_v = lift_to_cover(part, c.n);

    // Deck translates have coefficients a_j e^{-2 pi i j g / m}; the
    // translate sum is folded into family_correlation analytically, so only
    // the g = 0 window of each lift is transformed.
    std::vector<BumpSeries> bu{bump_series(fam_u.functions[0][0], Ku),
                               bump_series(fam_u.functions[0][1], Ku)};
    std::vector<BumpSeries> bv{bump_series(fam_v.functions[0][0], Kv),
                               bump_series(fam_v.functions[0][1], Kv)};

    const double tail_u = bu[0].tail_l1 + bu[1].tail_l1;
    const double tail_v = bv[0].tail_l1 + bv[1].tail_l1;
    // Propagation through the completeness sum is per generator direction
    // (the family sums are held at O(1) by the tiling bound), not per term.
    const double derived_tol = 8.0 * (tail_u + tail_v);
    const bool warn = requested_tolerance > 0.0 && requested_tolerance < derived_tol;
    const double effective_tol =
        requested_tolerance > 0.0 ? requested_tolerance : derived_tol;

    const double bound_v =
        tiling_bound(bv, c.n, grid_per_fold) + 2.0 * (bv[0].tail_sup + bv[1].tail_sup) + 1e-12;

    double residual = 0.0;
    std::vector<std::vector<Cx>> Vq;
    for (int q = 0; q < c.n; ++q)
        Vq.push_back(family_correlation(bv, c.n, q, Kv));
    for (int p = 0; p < c.m; ++p) {
        auto S = family_correlation(bu, c.m, p, Ku);
        double s_off = 0.0; // max_{J != 0} |S_p(J)|
        for (int J = -2 * Ku; J <= 2 * Ku; ++J)
            if (J != 0) s_off = std::max(s_off, std::abs(S[J + 2 * Ku]));
        const Cx s0 = S[2 * Ku];
        for (int q = 0; q < c.n; ++q) {
            const auto& V = Vq[static_cast<std::size_t>(q)];
            const bool identity = (p == 0 && q == 0);
            double worst = 0.0;
            for (int L = -2 * Kv; L <= 2 * Kv; ++L) {
                Cx want = (identity && L == 0) ? Cx{1.0, 0.0} : Cx{0.0, 0.0};
                worst = std::max(worst, std::abs(s0 * V[L + 2 * Kv] - want));
            }
            // columns J != 0 carry the rotation e^{-i theta' L J}; their
            // magnitude is certified by |S_p(J)| times the tiling bound
            worst = std::max(worst, s_off * bound_v);
            residual = std::max(residual, worst);
        }
    }

    CompletenessReport out;
    out.report = make_report("covering-completeness", residual, effective_tol);
    out.derived_tolerance = derived_tol;
    out.cutoff_warning = warn;
    out.tail_l1_u = tail_u;
    out.tail_l1_v = tail_v;
    return out;
}

// ---------------------------------------------------------------------------
// Towers and coherent prefixes
// ---------------------------------------------------------------------------

TowerCumulative cumulative_at(const TowerSpec& t, std::size_t level) {
    if (level > t.levels.size())
        throw std::invalid_argument("tower level out of range");
    TowerCumulative cum;
    for (std::size_t j = 0; j < level; ++j) {
        const TowerLevel& lv = t.levels[j];
        if (lv.m < 1 || lv.n < 1 || lv.k < 0)
            throw std::invalid_argument("invalid tower level");
        // theta_j M_j N_j = theta_{j-1} M_{j-1} N_{j-1} + 2 pi k_j M_{j-1} N_{j-1}
        cum.turns += static_cast<std::int64_t>(lv.k) * cum.m * cum.n;
        cum.m *= lv.m;
        cum.n *= lv.n;
    }
    return cum;
}

DeformationAngle theta_at(const TowerSpec& t, std::size_t level) {
    TowerCumulative cum = cumulative_at(t, level);
    // single-division form, so every consumer reproduces the same bits
    return DeformationAngle{(t.theta0 + two_pi * cum.turns) /
                            (static_cast<double>(cum.m) * cum.n)};
}

namespace {

AlgebraElement element_from_factors(const SeparableFactors& f, DeformationAngle th) {
    AlgebraElement useries = zero_element(th);
    for (std::size_t i = 0; i < f.u.size(); ++i)
        useries.accumulate(MonomialIndex{static_cast<std::int64_t>(i) - f.u_radius, 0},
                           f.u[i]);
    AlgebraElement vseries = zero_element(th);
    for (std::size_t i = 0; i < f.v.size(); ++i)
        vseries.accumulate(MonomialIndex{0, static_cast<std::int64_t>(i) - f.v_radius},
                           f.v[i]);
    return normal_order_product(useries, vseries);
}

} // namespace

CoherentPrefix make_partition_prefix(const TowerSpec& t, int base_cutoff,
                                     std::size_t grid_per_fold, int iu, int iv) {
    if (base_cutoff < 4) throw std::invalid_argument("base cutoff must be >= 4");
    if (iu < 0 || iu > 1 || iv < 0 || iv > 1)
        throw std::invalid_argument("bump selector must be 0 or 1");
    PartitionPair part = build_partition(grid_per_fold);

    CoherentPrefix out;
    out.tower = t;
    for (std::size_t level = 0; level <= t.depth(); ++level) {
        TowerCumulative cum = cumulative_at(t, level);
        LiftedFamily fu = lift_to_cover(part, static_cast<int>(cum.m));
        LiftedFamily fv = lift_to_cover(part, static_cast<int>(cum.n));
        SeparableFactors f;
        f.u_radius = cum.m * base_cutoff;
        f.v_radius = cum.n * base_cutoff;
        f.u = fourier_coefficients(
            complex_samples(fu.functions[0][static_cast<std::size_t>(iu)].samples),
            static_cast<int>(f.u_radius));
        f.v = fourier_coefficients(
            complex_samples(fv.functions[0][static_cast<std::size_t>(iv)].samples),
            static_cast<int>(f.v_radius));
        out.elements.push_back(element_from_factors(f, theta_at(t, level)));
        out.factors.push_back(std::move(f));
    }
    return out;
}

CoherenceReport coherence_check(const CoherentPrefix& p, double tolerance) {
    if (p.elements.size() != p.tower.depth() + 1)
        throw std::invalid_argument("prefix element count does not match tower depth");
    CoherenceReport out;
    for (std::size_t level = 0; level + 1 < p.elements.size(); ++level) {
        const TowerLevel& lv = p.tower.levels[level];
        CoveringParams step{lv.m, lv.n, lv.k};
        AlgebraElement down =
            descend(p.elements[level + 1], step, theta_at(p.tower, level));
        const double r = sup_coefficient_distance(p.elements[level], down);
        out.links.push_back({level + 1, r, r <= tolerance});
        out.max_residual = std::max(out.max_residual, r);
    }
    out.pass = out.max_residual <= tolerance && !out.links.empty();
    return out;
}

namespace {

// <a, b> for separable a = U_a V_a, b = U_b V_b at one tower level, already
// pulled back to the base: coefficient at base mode (rho, lambda) is
//   A(M rho) * C(N lambda; theta_level * M rho)
// with A the u-correlation and C the twist-rotated v-correlation. Exactness
// of the pullback phase uses theta_level * M * N = theta0 + 2 pi * turns.
AlgebraElement separable_inner(const SeparableFactors& a, const SeparableFactors& b,
                               DeformationAngle level_theta, TowerCumulative cum,
                               DeformationAngle base_theta, double scale) {
    AlgebraElement out = zero_element(base_theta);
    const auto ua_rad = a.u_radius, ub_rad = b.u_radius;
    const auto va_rad = a.v_radius, vb_rad = b.v_radius;

    const std::int64_t rho_max = (ua_rad + ub_rad) / cum.m;
    const std::int64_t lam_max = (va_rad + vb_rad) / cum.n;
    for (std::int64_t rho = -rho_max; rho <= rho_max; ++rho) {
        const std::int64_t R = rho * cum.m;
        Cx A{0.0, 0.0};
        for (std::int64_t r = -ua_rad; r <= ua_rad; ++r) {
            const std::int64_t rb = r + R;
            if (rb < -ub_rad || rb > ub_rad) continue;
            A += std::conj(a.u[static_cast<std::size_t>(r + ua_rad)]) *
                 b.u[static_cast<std::size_t>(rb + ub_rad)];
        }
        if (std::abs(A) == 0.0) continue;
        const double phi = level_theta.radians * static_cast<double>(R);
        for (std::int64_t lam = -lam_max; lam <= lam_max; ++lam) {
            const std::int64_t L = lam * cum.n;
            Cx C{0.0, 0.0};
            for (std::int64_t l = -va_rad; l <= va_rad; ++l) {
                const std::int64_t lb = l + L;
                if (lb < -vb_rad || lb > vb_rad) continue;
                const double ang = phi * static_cast<double>(l);
                C += std::conj(a.v[static_cast<std::size_t>(l + va_rad)]) *
                     b.v[static_cast<std::size_t>(lb + vb_rad)] *
                     Cx{std::cos(ang), std::sin(ang)};
            }
            const Cx val = scale * A * C;
            if (val != Cx{0.0, 0.0})
                out.accumulate(MonomialIndex{rho, lam}, val);
        }
    }
    return out;
}

} // namespace

InnerTrajectory limit_inner_estimate(const CoherentPrefix& p, const CoherentPrefix& q) {
    if (p.elements.size() != q.elements.size())
        throw std::invalid_argument("prefixes have different depths");
    if (p.elements.empty()) throw std::invalid_argument("empty prefix");
    if (p.tower.theta0 != q.tower.theta0 ||
        p.tower.levels.size() != q.tower.levels.size())
        throw std::invalid_argument("prefixes live on different towers");

    const bool fast = !p.factors.empty() && !q.factors.empty();
    DeformationAngle base = theta_at(p.tower, 0);

    InnerTrajectory out;
    for (std::size_t level = 0; level < p.elements.size(); ++level) {
        TowerCumulative cum = cumulative_at(p.tower, level);
        const double fold = static_cast<double>(cum.m) * cum.n;
        AlgebraElement avg = zero_element(base);
        if (fast) {
            avg = separable_inner(p.factors[level], q.factors[level],
                                  theta_at(p.tower, level), cum, base, 1.0);
        } else {
            CoveringParams whole{static_cast<int>(cum.m), static_cast<int>(cum.n), 0};
            // cumulative charge: theta_level = (theta0 + 2 pi turns)/(M N)
            whole.k = static_cast<int>(cum.turns);
            avg = module_inner(p.elements[level], q.elements[level], whole, base,
                               InnerNormalization::averaged);
        }
        AlgebraElement summed = scale(Cx{fold, 0.0}, avg);
        out.averaged.push_back(std::move(avg));
        out.summed.push_back(std::move(summed));
    }
    for (std::size_t level = 0; level + 1 < out.averaged.size(); ++level) {
        out.averaged_steps.push_back(
            sup_coefficient_distance(out.averaged[level], out.averaged[level + 1]));
        out.summed_steps.push_back(
            sup_coefficient_distance(out.summed[level], out.summed[level + 1]));
    }
    return out;
}

} // namespace ncg
