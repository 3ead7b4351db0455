#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "tpmab/harness.hpp"

namespace tpmab {

// Experiment config document:
// {
//   "environment": {"kind": "setting1"}
//                | {"kind": "setting2", "configuration": 3, "scenario": "late"}
//                | {"kind": "trace", "path": "demo.trace"}
//                | {"kind": "custom", "tau_max": ..., "alpha": ..., "arms": [...]},
//   "policies":   [{"kind": "tp_ucb_fr_g", "alpha_est": 50,
//                   "distribution": {"kind": "named", "name": "begin"}}, ...],
//   "horizon": 100000, "runs": 20, "seed": 42,
//   "checkpoint_stride": 100, "workers": 0,
//   "output": {"dir": "out"}
// }
// Relative trace paths resolve against base_dir (the config file's directory).

struct ConfigOverrides {
  std::optional<std::int64_t> horizon;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::string& base_dir = "",
                                         const ConfigOverrides& overrides = {});
ExperimentConfig load_experiment_config(const std::string& path,
                                        const ConfigOverrides& overrides = {});

DistSpec parse_dist_spec(const nlohmann::json& doc);
nlohmann::json to_json(const DistSpec& spec);

PolicySpec parse_policy_spec(const nlohmann::json& doc);
nlohmann::json to_json(const PolicySpec& spec);

EnvironmentConfig parse_environment(const nlohmann::json& doc,
                                    const std::string& base_dir = "");
nlohmann::json environment_to_json(const EnvironmentConfig& cfg);

// Compact command-line form: "uniform", "named:begin", "beta_binomial:2,8",
// "zipfian:1", "boltzmann:0.5", "hypergeometric:200". A bare preset name is
// also accepted.
DistSpec parse_dist_string(const std::string& text);

}  // namespace tpmab
