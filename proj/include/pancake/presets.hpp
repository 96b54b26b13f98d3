#pragma once

#include <string>
#include <vector>

#include "pancake/run_config.hpp"

namespace pancake {

/// Built-in run configurations: sphere | cylinder | dumbbell | stack-desk.
RunConfig preset_config(const std::string& name);

/// Initial curve for the evolve-style presets (sphere, cylinder, dumbbell);
/// stack-desk builds its curves through the join pipeline instead.
ProfileGraph preset_initial(const std::string& name, const RunConfig& cfg);

std::vector<std::string> preset_names();

}  // namespace pancake
