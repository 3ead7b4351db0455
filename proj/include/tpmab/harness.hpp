#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tpmab/env.hpp"
#include "tpmab/policies.hpp"

namespace tpmab {

struct ExperimentConfig {
  EnvironmentConfig environment;
  std::vector<PolicySpec> policies;
  std::int64_t horizon = 0;
  int num_runs = 1;
  std::uint64_t base_seed = 0;
  int checkpoint_stride = 100;
  int workers = 0;         // 0 = hardware concurrency
  std::string output_dir;  // empty = caller decides
};

void validate(const ExperimentConfig& cfg);

// Cumulative pseudo-regret of one seeded run, recorded every stride rounds
// (and at the horizon). time_avg is the exact average of the per-round
// cumulative regret over all T rounds.
struct RegretTrace {
  std::vector<std::int64_t> rounds;
  Eigen::ArrayXd values;
  double final_regret = 0.0;
  double time_avg = 0.0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>(const EnvironmentConfig&)>;

RegretTrace run_episode(const EnvironmentConfig& env, const PolicyFactory& make_policy,
                        std::int64_t horizon, std::uint64_t seed, int stride);
RegretTrace run_episode(const EnvironmentConfig& env, const PolicySpec& spec,
                        std::int64_t horizon, std::uint64_t seed, int stride);

struct PolicyAggregate {
  std::string name;
  std::vector<std::int64_t> rounds;
  Eigen::ArrayXd mean;       // mean cumulative regret per checkpoint
  Eigen::ArrayXd ci_half;    // 1.96 * sample stddev / sqrt(runs)
  double final_mean = 0.0;
  double final_ci = 0.0;
  double time_avg_mean = 0.0;
  double time_avg_ci = 0.0;
};

bool operator==(const PolicyAggregate& a, const PolicyAggregate& b);

struct AggregateResult {
  std::vector<PolicyAggregate> policies;
  std::int64_t horizon = 0;
  int num_runs = 0;
  std::uint64_t base_seed = 0;
  int checkpoint_stride = 0;
};

bool operator==(const AggregateResult& a, const AggregateResult& b);

// Runs num_runs seeded episodes per policy (seeds base_seed .. base_seed +
// num_runs - 1; run r of every policy shares seed base_seed + r, so learners
// are compared on common reward realizations). Episodes execute on a worker
// pool; the aggregate does not depend on scheduling.
AggregateResult run_experiment(const ExperimentConfig& cfg);

// CSV schema: policy_name,t,mean_regret,ci_half_width (RFC-style quoting for
// names containing commas).
void export_csv(const AggregateResult& result, std::ostream& out);
void export_csv(const AggregateResult& result, const std::string& path);
AggregateResult parse_results_csv(std::istream& in);
AggregateResult parse_results_csv_file(const std::string& path);

// JSON mirror with experiment metadata. config_echo is stored verbatim under
// "config" (pass the original config document, or a synthesized one).
void export_json(const AggregateResult& result, const std::string& config_echo,
                 const std::string& path);
AggregateResult parse_results_json_file(const std::string& path);

// Human-readable summary sorted by time-averaged regret, with the decrease
// relative to the first plain TP-UCB-FR entry (if any).
std::string summary_table(const AggregateResult& result);

}  // namespace tpmab
