#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trobust/simulate.hpp"

namespace trobust {

// Named study configurations (replication seeds included) so the studies
// behind the reported tables and figures are runnable by name from the CLI.
std::optional<SimulationSpec> findPreset(const std::string& name);
std::vector<std::string> listPresets();

}  // namespace trobust
