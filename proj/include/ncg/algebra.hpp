#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>

#include "ncg/rng.hpp"

namespace ncg {

using Cx = std::complex<double>;

// Deformation parameter theta, in radians: the generators obey
// u v = e^{i theta} v u. theta enters products only through unimodular
// phases, so two elements interoperate iff their angles are bitwise equal.
struct DeformationAngle {
    double radians = 0.0;

    friend bool operator==(DeformationAngle a, DeformationAngle b) {
        return a.radians == b.radians;
    }
};

struct MonomialIndex {
    std::int64_t r = 0;
    std::int64_t s = 0;

    friend auto operator<=>(const MonomialIndex&, const MonomialIndex&) = default;
};

// Unevaluated unimodular factor e^{-i theta k} e^{2 pi i turn_num/turn_den}.
// k and the rational turn count are kept in closed form so that adjoint
// involutivity, monomial unitarity, embedding homomorphy and deck-action
// composition hold exactly; trigonometric evaluation happens only when a
// plain amplitude is demanded. turn is reduced with 0 <= turn_num < turn_den.
struct TwistPhase {
    std::int64_t k = 0;
    std::int64_t turn_num = 0;
    std::int64_t turn_den = 1;

    static TwistPhase theta_units(std::int64_t k);
    static TwistPhase turns(std::int64_t num, std::int64_t den);

    TwistPhase composed(const TwistPhase& other) const;
    TwistPhase conjugated() const; // negates both components
    bool trivial() const { return k == 0 && turn_num == 0; }
    Cx evaluate(DeformationAngle theta) const;

    friend bool operator==(const TwistPhase&, const TwistPhase&) = default;
};

// One finitely supported coefficient: amplitude = c * phase(theta).
struct Term {
    Cx c = 0.0;
    TwistPhase phase;

    Cx amplitude(DeformationAngle theta) const {
        return phase.trivial() ? c : c * phase.evaluate(theta);
    }
};

// Finitely supported twisted Laurent series sum a_{rs} u^r v^s in normal
// order (all u powers left of all v powers). The map is the canonical form:
// keys sorted lexicographically, no exactly-zero stored amplitudes.
class AlgebraElement {
public:
    AlgebraElement() = default;
    explicit AlgebraElement(DeformationAngle theta) : theta_(theta) {}

    DeformationAngle theta() const { return theta_; }
    const std::map<MonomialIndex, Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Adds c * phase * w(r, s), merging with any existing coefficient.
    // Equal ledgers merge symbolically; unequal ledgers force evaluation.
    void accumulate(MonomialIndex m, Cx c, TwistPhase phase = {});

    Cx amplitude(MonomialIndex m) const; // 0 for absent keys
    std::int64_t support_radius() const; // max over keys of max(|r|, |s|)

    // Drops terms whose evaluated amplitude is at or below `floor`.
    void prune(double floor);

    // Collapses every ledger into its evaluated amplitude.
    AlgebraElement evaluated() const;

private:
    DeformationAngle theta_;
    std::map<MonomialIndex, Term> terms_;
};

AlgebraElement zero_element(DeformationAngle theta);
AlgebraElement one_element(DeformationAngle theta);
AlgebraElement monomial(DeformationAngle theta, std::int64_t r, std::int64_t s,
                        Cx c = 1.0, TwistPhase phase = {});

// w(r1,s1) w(r2,s2) = e^{-i theta s1 r2} w(r1+r2, s1+s2), extended
// bilinearly. Phase multipliers are accumulated as integers before any
// trigonometric evaluation. Throws std::invalid_argument on angle mismatch.
AlgebraElement normal_order_product(const AlgebraElement& a,
                                    const AlgebraElement& b);

// (c w(r,s))* = conj(c) e^{-i theta r s} w(-r,-s).
AlgebraElement adjoint(const AlgebraElement& a);

// tau0(a) = a_{00}; the unique normalized trace at irrational angles.
Cx trace_tau0(const AlgebraElement& a);

// GNS inner product (a, b) = tau0(a* b); conjugate-linear in `a`.
Cx gns_inner(const AlgebraElement& a, const AlgebraElement& b);
double gns_norm(const AlgebraElement& a);

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(Cx c, const AlgebraElement& a);

// delta1 w(r,s) = 2 pi i r w(r,s); delta2 w(r,s) = 2 pi i s w(r,s).
AlgebraElement delta1(const AlgebraElement& a);
AlgebraElement delta2(const AlgebraElement& a);

// Complex combination d_tau = delta1 + tau delta2 and its formal adjoint
// -delta1 - conj(tau) delta2. Requires Im(tau) != 0.
AlgebraElement partial_tau(const AlgebraElement& a, Cx tau);
AlgebraElement partial_tau_dagger(const AlgebraElement& a, Cx tau);

// Covering-rescaled derivations (1/m) delta1 and (1/n) delta2.
std::pair<AlgebraElement, AlgebraElement>
scaled_derivations(const AlgebraElement& a, int m, int n);

// Largest evaluated |a_{rs}|.
double sup_coefficient_norm(const AlgebraElement& a);
// Coefficient sup-norm of a - b (supports need not match).
double sup_coefficient_distance(const AlgebraElement& a,
                                const AlgebraElement& b);
// True iff evaluated amplitudes agree bitwise on identical supports.
bool exactly_equal(const AlgebraElement& a, const AlgebraElement& b);

// Dense random element on the square max(|r|,|s|) <= radius with amplitudes
// uniform in the complex unit box; used by seeded verification batches.
AlgebraElement random_element(DeformationAngle theta, std::int64_t radius,
                              SplitMix64& rng);
// Random single monomial with unit amplitude.
AlgebraElement random_monomial(DeformationAngle theta, std::int64_t radius,
                               SplitMix64& rng);

} // namespace ncg
