#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tpmab/env.hpp"
#include "tpmab/spread.hpp"

namespace tpmab {

// Learner interface. The driver alternates select_arm(t) / update(batch for
// round t), t = 1, 2, ... All learners pull arms 1..K round-robin first.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int select_arm(int t) = 0;
  virtual void update(const ObservationBatch& batch) = 0;
  virtual const std::string& name() const = 0;
};

// Per-arm bookkeeping over the sliding window of pulls whose rewards are
// still arriving. A pull made at round h is live until its last partial
// shows up at round h + tau_max - 1; afterwards its cumulative reward is
// frozen into the completed sums. Observed-so-far sums treat future partials
// as zero, so they never exceed the eventual cumulative reward.
class WindowStats {
 public:
  WindowStats(int num_arms, int tau_max);

  // Apply the round-t batch: the item with pull_round == t opens a new live
  // pull; other items must belong to known live pulls. Advances the clock.
  void apply(const ObservationBatch& batch);

  int round() const { return round_; }
  int num_arms() const { return num_arms_; }
  std::int64_t pulls(int arm) const { return pulls_[arm]; }  // live + completed
  std::int64_t completed_pulls(int arm) const { return completed_pulls_[arm]; }
  double completed_sum(int arm) const { return completed_sum_[arm]; }

  // completed_sum + live partial sums, added in pull-round order.
  double observed_sum(int arm) const;

 private:
  struct LivePull {
    int round;
    double sum;
  };

  int num_arms_;
  int tau_max_;
  int round_ = 0;
  std::vector<std::int64_t> pulls_;
  std::vector<std::int64_t> completed_pulls_;
  std::vector<double> completed_sum_;
  std::vector<std::deque<LivePull>> live_;  // per arm, oldest first
};

// Frozen-reward UCB learner driven by an assumed reward-spread pmf B on
// {1..alpha_est}. Still-missing partials count as zero in the mean estimate;
// the confidence radius compensates with
//   c = phi * max_reward * E[Y] / N + max_reward * sqrt(2 ln(t-1) * IC / N)
// where phi = tau_max / alpha_est, E[Y] = sum k B(k), IC = sum B(k)^2.
class TpUcbFrG : public Policy {
 public:
  TpUcbFrG(std::vector<double> max_rewards, int tau_max, int alpha_est, SpreadPmf assumed,
           std::string name = "");

  int select_arm(int t) override;
  void update(const ObservationBatch& batch) override { stats_.apply(batch); }
  const std::string& name() const override { return name_; }

  // Mean of observed-so-far cumulative rewards over all pulls of the arm.
  double estimated_mean(int arm) const;
  // Confidence radius at selection round t (requires t >= 2, N_arm >= 1).
  double confidence_term(int arm, int t) const;

  const WindowStats& stats() const { return stats_; }
  const SpreadPmf& assumed_spread() const { return assumed_; }
  int alpha_est() const { return alpha_est_; }

 private:
  std::vector<double> max_rewards_;
  int tau_max_;
  int alpha_est_;
  SpreadPmf assumed_;
  double phi_;
  double ey_;
  double ic_;
  std::string name_;
  WindowStats stats_;
};

// Confidence-radius kernel, exposed for direct evaluation.
double frg_confidence(double max_reward, double phi, double expected_index,
                      double index_of_coincidence, std::int64_t n, double log_term);

// Classical UCB index over observed-so-far cumulative rewards, scaled by the
// global reward bound: mean + r_max * sqrt(2 ln t / N).
class Ucb1 : public Policy {
 public:
  Ucb1(std::vector<double> max_rewards, int tau_max, std::string name = "UCB1");

  int select_arm(int t) override;
  void update(const ObservationBatch& batch) override { stats_.apply(batch); }
  const std::string& name() const override { return name_; }

 private:
  double r_max_;
  std::string name_;
  WindowStats stats_;
};

// UCB that ignores a pull until its reward has fully arrived; arms with no
// completed pull yet are treated as unexplored.
class DelayedUcb1 : public Policy {
 public:
  DelayedUcb1(std::vector<double> max_rewards, int tau_max,
              std::string name = "Delayed-UCB1");

  int select_arm(int t) override;
  void update(const ObservationBatch& batch) override { stats_.apply(batch); }
  const std::string& name() const override { return name_; }

 private:
  double r_max_;
  std::string name_;
  WindowStats stats_;
};

std::unique_ptr<Policy> make_tp_ucb_fr_g(std::vector<double> max_rewards, int tau_max,
                                         int alpha_est, SpreadPmf assumed,
                                         std::string name = "");
std::unique_ptr<Policy> make_tp_ucb_fr(std::vector<double> max_rewards, int tau_max,
                                       int alpha_est, std::string name = "");
std::unique_ptr<Policy> make_ucb1(std::vector<double> max_rewards, int tau_max);
std::unique_ptr<Policy> make_delayed_ucb1(std::vector<double> max_rewards, int tau_max);

// Config-facing learner description.
struct PolicySpec {
  enum class Kind { tp_ucb_fr_g, tp_ucb_fr, ucb1, delayed_ucb1 };
  Kind kind = Kind::tp_ucb_fr;
  int alpha_est = 0;                  // TP learners only
  std::optional<DistSpec> distribution;  // tp_ucb_fr_g only
  std::string display_name;           // optional override
};

std::string default_policy_name(const PolicySpec& spec);
std::unique_ptr<Policy> build_policy(const PolicySpec& spec, const EnvironmentConfig& env);

}  // namespace tpmab
