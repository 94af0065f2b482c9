#pragma once

#include "json.hpp"

#include "suds/phase.hpp"

namespace suds {

// Shared between the nominal-gait and model serializers (defined in phase.cpp).
nlohmann::json nominal_to_json(const NominalGait& nominal);
NominalGait nominal_from_json(const nlohmann::json& j);

}  // namespace suds
