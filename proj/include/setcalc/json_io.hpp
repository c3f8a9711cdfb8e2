#pragma once

#include "json.hpp"
#include "setcalc/finite_core.hpp"
#include "setcalc/hybrid_measure.hpp"

namespace setcalc {

/// {"elements": [names], "weights": [positive numbers]}
nlohmann::json universe_to_json(const UniversePtr& u);
UniversePtr universe_from_json(const nlohmann::json& j);

/// Sorted element-name array.
nlohmann::json subset_to_json(const Subset& s);
Subset subset_from_json(const nlohmann::json& j, const UniversePtr& u);

/// {"intervals": [{"a","b","closed_left","closed_right"}],
///  "fractals": [{"a","b","k","r"}], "points": [numbers]}
nlohmann::json hybrid_to_json(const HybridSet& a);
HybridSet hybrid_from_json(const nlohmann::json& j);

/// {"alpha": [a1,a2,a3], "c": number, "H": "one" | "exp_abs" | {"table": [[x,w]...]}}
nlohmann::json config_to_json(const MeasureConfig& cfg);
MeasureConfig config_from_json(const nlohmann::json& j);

/// Parse failures rethrown as Error with the offending key in the message.
nlohmann::json parse_json(const std::string& text);

}  // namespace setcalc
