#pragma once

#include <json.hpp>

#include "trobust/results.hpp"
#include "trobust/simulate.hpp"

namespace trobust::cli {

using nlohmann::json;

// FitResult round-trips exactly (non-finite numbers travel as null).
json toJson(const FitResult& fit);
FitResult fitResultFromJson(const json& j);

json toJson(const NuEstimationResult& result);

json toJson(const MetricsReport& report);

// Study specs are read from user files: unknown or ill-typed fields raise
// SchemaError naming the field.
json toJson(const SimulationSpec& spec);
SimulationSpec simulationSpecFromJson(const json& j);

}  // namespace trobust::cli
