#include "tpmab/presets.hpp"

#include <stdexcept>

#include "tpmab/spread.hpp"

namespace tpmab {

namespace {

nlohmann::json learner_roster(int alpha_est) {
  nlohmann::json policies = nlohmann::json::array();
  policies.push_back({{"kind", "ucb1"}});
  policies.push_back({{"kind", "delayed_ucb1"}});
  policies.push_back({{"kind", "tp_ucb_fr"}, {"alpha_est", alpha_est}});
  for (const auto& preset : spread_presets()) {
    policies.push_back({{"kind", "tp_ucb_fr_g"},
                        {"alpha_est", alpha_est},
                        {"distribution", {{"kind", "named"}, {"name", preset.name}}}});
  }
  return policies;
}

nlohmann::json setting1_preset(int alpha_est) {
  return {{"environment", {{"kind", "setting1"}}},
          {"policies", learner_roster(alpha_est)},
          {"horizon", 100000},
          {"runs", 100},
          {"seed", 42},
          {"checkpoint_stride", 100}};
}

nlohmann::json setting2_preset(int configuration, const std::string& scenario) {
  static const int alphas[] = {0, 10, 50, 20, 100};
  return {{"environment",
           {{"kind", "setting2"}, {"configuration", configuration}, {"scenario", scenario}}},
          {"policies", learner_roster(alphas[configuration])},
          {"horizon", 100000},
          {"runs", 100},
          {"seed", 42},
          {"checkpoint_stride", 100}};
}

nlohmann::json trace_demo_preset() {
  nlohmann::json policies = nlohmann::json::array();
  policies.push_back({{"kind", "ucb1"}});
  policies.push_back({{"kind", "delayed_ucb1"}});
  policies.push_back({{"kind", "tp_ucb_fr"}, {"alpha_est", 2}});
  policies.push_back({{"kind", "tp_ucb_fr_g"},
                      {"alpha_est", 2},
                      {"distribution", {{"kind", "named"}, {"name", "begin"}}}});
  return {{"environment", {{"kind", "trace"}, {"path", "demo.trace"}}},
          {"policies", policies},
          {"horizon", 5000},
          {"runs", 20},
          {"seed", 42},
          {"checkpoint_stride", 10}};
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (int a : {5, 10, 20, 25, 50}) names.push_back("setting1_alpha" + std::to_string(a));
  for (int c : {1, 2, 3, 4})
    for (const char* s : {"uniform", "late", "early"})
      names.push_back("setting2_c" + std::to_string(c) + "_" + s);
  names.push_back("trace_demo");
  return names;
}

bool is_preset(const std::string& name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

nlohmann::json preset_config(const std::string& name) {
  for (int a : {5, 10, 20, 25, 50})
    if (name == "setting1_alpha" + std::to_string(a)) return setting1_preset(a);
  for (int c : {1, 2, 3, 4})
    for (const char* s : {"uniform", "late", "early"})
      if (name == "setting2_c" + std::to_string(c) + "_" + s) return setting2_preset(c, s);
  if (name == "trace_demo") return trace_demo_preset();
  std::string known;
  for (const auto& n : preset_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

std::string demo_trace_text() {
  // 2 arms, tau_max = 4; arm 0 pays out early, arm 1 late but more in total.
  return "tpmab-trace v1 K=2 tau_max=4\n"
         "0,5.0,2.0,1.0,0.0\n"
         "0,6.0,1.5,0.5,0.0\n"
         "0,4.0,2.5,1.5,0.0\n"
         "0,5.5,2.0,0.5,0.0\n"
         "1,0.5,1.0,3.0,6.0\n"
         "1,0.0,1.5,3.5,6.5\n"
         "1,1.0,1.0,2.5,5.5\n"
         "1,0.5,2.0,3.0,7.0\n";
}

}  // namespace tpmab
