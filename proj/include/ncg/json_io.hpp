#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ncg/algebra.hpp"
#include "ncg/coverings.hpp"
#include "ncg/dixmier.hpp"
#include "ncg/report.hpp"
#include "ncg/spectral_triple.hpp"

namespace ncg {

// Element wire form: {"theta": <radians>, "terms": [{"r","s","re","im"}]}
// with re/im the evaluated amplitude of each mode.
nlohmann::json element_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const nlohmann::json& j);

// Check wire form, exactly these five fields:
// {"axiom","residual","pass","window","guard"}.
nlohmann::json report_to_json(const AxiomReport& r);
AxiomReport report_from_json(const nlohmann::json& j);

// Tower wire form: {"theta0", "levels": [{"m","n","k"}]}.
nlohmann::json tower_to_json(const TowerSpec& t);
TowerSpec tower_from_json(const nlohmann::json& j);

// Estimate wire form: {"value","fit_b","fit_residual","lambda_max"}.
nlohmann::json estimate_to_json(const NcIntEstimate& e);

// CSV forms: spectra as "eigenvalue,multiplicity" rows, singular value
// streams as "index,value" rows, each with a header line.
std::string spectrum_to_csv(const std::vector<SpectralPoint>& pts);
std::string stream_to_csv(const std::vector<double>& values);

inline constexpr const char* campaign_schema = "ncg-report/1";

} // namespace ncg
