#include "ncg/json_io.hpp"

#include <sstream>

namespace ncg {

nlohmann::json element_to_json(const AlgebraElement& a) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [idx, t] : a.terms()) {
        const Cx amp = t.amplitude(a.theta());
        terms.push_back({{"r", idx.r}, {"s", idx.s}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return {{"theta", a.theta().radians}, {"terms", terms}};
}

AlgebraElement element_from_json(const nlohmann::json& j) {
    AlgebraElement out = zero_element(DeformationAngle{j.at("theta").get<double>()});
    for (const auto& t : j.at("terms")) {
        out.accumulate(MonomialIndex{t.at("r").get<std::int64_t>(),
                                     t.at("s").get<std::int64_t>()},
                       Cx{t.at("re").get<double>(), t.at("im").get<double>()});
    }
    return out;
}

nlohmann::json report_to_json(const AxiomReport& r) {
    return {{"axiom", r.axiom},
            {"residual", r.residual},
            {"pass", r.pass},
            {"window", r.window},
            {"guard", r.guard}};
}

AxiomReport report_from_json(const nlohmann::json& j) {
    AxiomReport r;
    r.axiom = j.at("axiom").get<std::string>();
    r.residual = j.at("residual").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.window = j.at("window").get<int>();
    r.guard = j.at("guard").get<int>();
    return r;
}

nlohmann::json tower_to_json(const TowerSpec& t) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lv : t.levels)
        levels.push_back({{"m", lv.m}, {"n", lv.n}, {"k", lv.k}});
    return {{"theta0", t.theta0}, {"levels", levels}};
}

TowerSpec tower_from_json(const nlohmann::json& j) {
    TowerSpec t;
    t.theta0 = j.at("theta0").get<double>();
    for (const auto& lv : j.at("levels"))
        t.levels.push_back({lv.at("m").get<int>(), lv.at("n").get<int>(),
                            lv.at("k").get<int>()});
    return t;
}

nlohmann::json estimate_to_json(const NcIntEstimate& e) {
    return {{"value", e.value},
            {"fit_b", e.fit_b},
            {"fit_residual", e.fit_residual},
            {"lambda_max", e.lambda_max}};
}

std::string spectrum_to_csv(const std::vector<SpectralPoint>& pts) {
    std::ostringstream os;
    os.precision(17);
    os << "eigenvalue,multiplicity\n";
    for (const auto& p : pts) os << p.value << "," << p.multiplicity << "\n";
    return os.str();
}

std::string stream_to_csv(const std::vector<double>& values) {
    std::ostringstream os;
    os.precision(17);
    os << "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i + 1) << "," << values[i] << "\n";
    return os.str();
}

} // namespace ncg
