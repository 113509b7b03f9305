#pragma once

#include "morrey/checks.hpp"
#include "morrey/modular.hpp"
#include "morrey/operators.hpp"
#include "morrey/params.hpp"

#include <json.hpp>

namespace morrey {

using Json = nlohmann::json;

Json to_json(const GridSpec& spec);
Json to_json(const MorreyParams& mp);
Json to_json(const RadiusLadder& ladder);
Json to_json(const OperatorSpec& op);
OperatorSpec operator_spec_from_json(const Json& j);

Json to_json(const ModularProfile& profile);
Json to_json(const VStarSequence& seq);
Json to_json(const DominanceReport& report);
Json to_json(const ScalingReport& report);
Json to_json(const VanishingThresholds& thresholds);
Json to_json(const PropertyDiagnosis& diag);
Json to_json(const VanishingDiagnosis& diag);
Json to_json(const PreservationReport& report);
Json to_json(const BoundReport& report);
Json to_json(const HedbergReport& report);
Json to_json(const RatioReport& report);

// Common report envelope: {"kind", "paper_ref", "pass", "tolerances", ...payload}.
Json make_report(const std::string& kind, const std::string& paper_ref, bool pass,
                 Json tolerances, Json payload);

}  // namespace morrey
