#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace tpmab {

// Bundled experiment configs: setting1_alpha{5,10,20,25,50},
// setting2_c{1..4}_{uniform,late,early} and trace_demo. Each reproduces one
// experiment grid cell with the full learner roster.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
nlohmann::json preset_config(const std::string& name);

// Tiny synthetic trace used by the trace_demo preset (and shipped under
// configs/demo.trace).
std::string demo_trace_text();

}  // namespace tpmab
