#pragma once

#include <string>
#include <vector>

namespace ncg {

// Outcome of one verified identity. `residual` is the measured deviation,
// `pass` compares it against the tolerance that was in force; window/guard
// record the truncation the check ran at (0 when not applicable).
struct AxiomReport {
    std::string axiom;
    double residual = 0.0;
    bool pass = false;
    int window = 0;
    int guard = 0;
};

inline AxiomReport make_report(std::string axiom, double residual,
                               double tolerance, int window = 0,
                               int guard = 0) {
    AxiomReport r;
    r.axiom = std::move(axiom);
    r.residual = residual;
    r.pass = residual <= tolerance;
    r.window = window;
    r.guard = guard;
    return r;
}

inline bool all_pass(const std::vector<AxiomReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

} // namespace ncg
