#pragma once

#include <Eigen/Dense>

#include "tpmab/env.hpp"
#include "tpmab/spread.hpp"

namespace tpmab {

// Everything the closed-form regret bounds need to know about a problem
// instance: arm means and reward bounds, plus the spread pmf whose alpha
// partitions the delay window (phi = tau_max / alpha).
struct InstanceSummary {
  Eigen::ArrayXd means;        // mu_i
  Eigen::ArrayXd max_rewards;  // per-arm reward upper bounds
  SpreadPmf spread;
  int phi = 1;

  double mu_star() const { return means.maxCoeff(); }
  double r_max() const { return max_rewards.maxCoeff(); }
  Eigen::ArrayXd gaps() const { return mu_star() - means; }
};

InstanceSummary summarize_instance(const EnvironmentConfig& cfg, SpreadPmf spread);

// KL divergence between Bernoulli(p) and Bernoulli(q), with 0 ln(0/x) = 0.
// Requires p in [0,1] and q in [0,1]; q in {0,1} with p != q yields +inf.
double kl_bernoulli(double p, double q);

// Asymptotic regret floor for any uniformly efficient learner:
//   ln T * sum_{i: mu_i < mu*} (2/(alpha+1)) E[Y] * alpha IC
//                              * gap_i / (alpha KL(mu_i/r_max, mu*/r_max)).
// Returns +inf when mu* is within 1e-15 of r_max (degenerate KL).
double lower_bound_curve(const InstanceSummary& inst, double T);

// Same floor under the uniform-spread assumption:
//   ln T * sum gap_i / (alpha KL(...)). The general curve reduces to this
// when the spread is uniform.
double lower_bound_alpha_smooth(const InstanceSummary& inst, double T);

// Closed-form regret ceiling of the frozen-reward learner whose assumed pmf
// matches the true spread:
//   sum_i 4 ln T (Rbar_i^2 IC)/gap_i * (1 + sqrt(1 + gap_i phi E[Y]/(Rbar_i ln T IC)))
//   + 2 phi E[Y] sum_i Rbar_i + (1 + pi^2/3) sum_i gap_i,
// suboptimal arms only. Requires T >= 2.
double upper_bound_curve(const InstanceSummary& inst, double T);

// Same ceiling with the spread moments overridden; used to compare assumed
// distributions on one instance. Monotone in both moments.
double upper_bound_with_moments(const InstanceSummary& inst, double expected_index,
                                double index_of_coincidence, double T);

// Left-hand side of the comparison against the uniform-spread floor. The
// general floor is strictly tighter when value > 1; uniform gives exactly 1.
struct Tightness {
  double value = 0.0;
  bool tighter = false;
};
Tightness tightness_condition(const SpreadPmf& spread);

// Integer horizon grid, log-spaced and deduplicated, all >= 2.
std::vector<double> log_spaced_grid(double t_min, double t_max, int points);

// CSV rows T,lower_bound,upper_bound,upper_bound_uniform,tightness_value.
// upper_bound_uniform evaluates the ceiling with uniform-spread moments at
// the same alpha; infinities render as empty fields (missing curve).
std::string bounds_csv(const InstanceSummary& inst, const std::vector<double>& t_grid);

}  // namespace tpmab
