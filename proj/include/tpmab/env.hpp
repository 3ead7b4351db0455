#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tpmab {

// Reward generators. A pull of an arm yields tau_max per-round partial
// rewards; the generator draws one aggregate per z-group (alpha groups of
// phi = tau_max/alpha consecutive rounds) and spreads it evenly inside the
// group. Group aggregates are capped at max_reward/alpha.

struct UniformScaledSampler {};  // Z_k ~ (max_reward/alpha) * U[0,1)

struct BetaScaledSampler {  // Z_k ~ (max_reward/alpha) * Beta(a[k], b[k])
  Eigen::ArrayXd a;
  Eigen::ArrayXd b;
};

struct TraceSampler {  // replay recorded per-round reward vectors
  std::shared_ptr<const std::vector<Eigen::ArrayXd>> records;
};

using ZGroupSampler = std::variant<UniformScaledSampler, BetaScaledSampler, TraceSampler>;

struct ArmSpec {
  double max_reward = 0.0;  // upper bound on a pull's cumulative reward
  ZGroupSampler sampler;
};

struct EnvironmentConfig {
  int num_arms = 0;
  int tau_max = 0;
  int alpha = 0;  // must divide tau_max
  std::vector<ArmSpec> arms;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument describing the first violated constraint.
void validate(const EnvironmentConfig& cfg);

struct Observation {
  int arm = 0;
  int pull_round = 0;  // round h the originating pull was made
  double value = 0.0;
};

struct ObservationBatch {
  int round = 0;
  std::vector<Observation> items;
};

// Expected cumulative reward of one pull of an arm.
double true_mean(const EnvironmentConfig& cfg, int arm);

// One seeded reward process. Rewards for the n-th pull of an arm are a pure
// function of (seed, arm, n), so any two learners driven with the same seed
// see identical realizations no matter when they pull.
class Environment {
 public:
  explicit Environment(EnvironmentConfig cfg);

  const EnvironmentConfig& config() const { return cfg_; }

  // Registers the round-t pull and returns its per-round reward vector
  // (index j-1 holds the partial revealed at round t+j-1). Pulls must be
  // registered once per round in increasing round order.
  const Eigen::ArrayXd& sample_pull(int arm, int t);

  // Partial rewards revealed at round t: one per live pull h in
  // (t - tau_max, t]. Empty before the first pull.
  ObservationBatch observe(int t) const;
  void observe(int t, ObservationBatch& out) const;

  double true_mean(int arm) const { return tpmab::true_mean(cfg_, arm); }

 private:
  struct PullSlot {
    int round = 0;  // 0 = empty
    int arm = -1;
    Eigen::ArrayXd rewards;
  };

  EnvironmentConfig cfg_;
  std::vector<PullSlot> ring_;          // last tau_max pulls, keyed by round
  std::vector<std::int64_t> n_pulls_;   // per-arm pull counter (rng key)
  int last_round_ = 0;
};

// K arms with uniformly spread rewards, max rewards 100 * {1,3,6,...,23}.
EnvironmentConfig make_setting1(int alpha_true = 20, int tau_max = 100, int K = 10);

enum class Scenario { uniform, late, early };
Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

// Beta-shaped reward spread. Configurations fix (tau_max, alpha):
//   1: (100, 10)   2: (100, 50)   3: (200, 20)   4: (200, 100)
// Scenario selects the per-group Beta parameter vectors: all-ones (uniform),
// rewards arriving mostly late, or mostly early.
EnvironmentConfig make_setting2(int configuration, Scenario scenario);

// Per-group Beta parameter vector used by make_setting2 (exposed for tests
// and config echo): 2,4,...,alpha-2 then alpha repeated.
Eigen::ArrayXd setting2_ramp(int alpha);

// Trace-driven environment. File format:
//   tpmab-trace v1 K=<K> tau_max=<tau>
//   <arm_index>,<x_1>,...,<x_tau_max>
// Each record is one historical pull; replay samples per-arm records
// uniformly with replacement. max_reward is the largest recorded cumulative
// reward of the arm.
EnvironmentConfig make_trace_env(const std::string& path, int K, int tau_max);
EnvironmentConfig make_trace_env(const std::string& path);  // K, tau from header

}  // namespace tpmab
