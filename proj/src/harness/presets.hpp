#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "harness/config.hpp"

namespace aqmsim::harness {

std::vector<std::string> preset_names();

// Throws ConfigError listing the available names when `name` is unknown.
ScenarioDocument preset(std::string_view name);

}  // namespace aqmsim::harness
