#pragma once

#include <json.hpp>

#include "stackedge/equilibrium.hpp"
#include "stackedge/pricing_discriminatory.hpp"
#include "stackedge/pricing_uniform.hpp"

namespace stackedge::cli {

// All CLI JSON uses insertion-ordered keys so output is stable for snapshot
// comparisons.
using Json = nlohmann::ordered_json;

Json equilibrium_json(const EquilibriumReport& report);
Json condition_json(const ConditionCheck& check);
Json deviation_json(const DeviationReport& report);
Json regime_json(const RegimeCheck& regime);
Json uniform_optimum_json(const UniformOptimum& result);
Json discriminatory_optimum_json(const DiscriminatoryOptimum& result);

}  // namespace stackedge::cli
