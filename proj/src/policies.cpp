#include "tpmab/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tpmab {

WindowStats::WindowStats(int num_arms, int tau_max)
    : num_arms_(num_arms), tau_max_(tau_max) {
  if (num_arms < 1) throw std::invalid_argument("WindowStats: num_arms must be >= 1");
  if (tau_max < 1) throw std::invalid_argument("WindowStats: tau_max must be >= 1");
  pulls_.assign(num_arms, 0);
  completed_pulls_.assign(num_arms, 0);
  completed_sum_.assign(num_arms, 0.0);
  live_.resize(num_arms);
}

void WindowStats::apply(const ObservationBatch& batch) {
  const int t = batch.round;
  if (t != round_ + 1)
    throw std::logic_error("WindowStats: batch for round " + std::to_string(t) +
                           " applied at clock " + std::to_string(round_));

  for (const auto& obs : batch.items) {
    if (obs.arm < 0 || obs.arm >= num_arms_)
      throw std::logic_error("WindowStats: observation for unknown arm");
    auto& window = live_[obs.arm];
    if (obs.pull_round == t) {
      window.push_back({t, obs.value});
      ++pulls_[obs.arm];
    } else {
      bool found = false;
      for (auto& lp : window) {
        if (lp.round == obs.pull_round) {
          lp.sum += obs.value;
          found = true;
          break;
        }
      }
      if (!found)
        throw std::logic_error("WindowStats: observation references unknown pull at round " +
                               std::to_string(obs.pull_round));
    }
  }

  // The pull made at t - tau_max + 1 received its last partial this round.
  const int closing = t - tau_max_ + 1;
  if (closing >= 1) {
    for (int arm = 0; arm < num_arms_; ++arm) {
      auto& window = live_[arm];
      if (!window.empty() && window.front().round == closing) {
        completed_sum_[arm] += window.front().sum;
        ++completed_pulls_[arm];
        window.pop_front();
        break;  // one pull per round
      }
    }
  }
  round_ = t;
}

double WindowStats::observed_sum(int arm) const {
  double total = completed_sum_[arm];
  for (const auto& lp : live_[arm]) total += lp.sum;
  return total;
}

double frg_confidence(double max_reward, double phi, double expected_index,
                      double index_of_coincidence, std::int64_t n, double log_term) {
  return phi * max_reward * expected_index / n +
         max_reward * std::sqrt(2.0 * log_term * index_of_coincidence / n);
}

TpUcbFrG::TpUcbFrG(std::vector<double> max_rewards, int tau_max, int alpha_est,
                   SpreadPmf assumed, std::string name)
    : max_rewards_(std::move(max_rewards)),
      tau_max_(tau_max),
      alpha_est_(alpha_est),
      assumed_(std::move(assumed)),
      name_(std::move(name)),
      stats_(static_cast<int>(max_rewards_.size()), tau_max) {
  if (alpha_est_ < 1 || tau_max_ % alpha_est_ != 0)
    throw std::invalid_argument("TpUcbFrG: alpha_est must divide tau_max");
  if (assumed_.alpha() != alpha_est_)
    throw std::invalid_argument("TpUcbFrG: assumed spread has alpha " +
                                std::to_string(assumed_.alpha()) + ", expected " +
                                std::to_string(alpha_est_));
  phi_ = static_cast<double>(tau_max_) / alpha_est_;
  ey_ = expected_index(assumed_);
  ic_ = index_of_coincidence(assumed_);
  if (name_.empty()) name_ = "TP-UCB-FR-G(" + std::to_string(alpha_est_) + ")";
}

double TpUcbFrG::estimated_mean(int arm) const {
  const std::int64_t n = stats_.pulls(arm);
  if (n == 0) throw std::logic_error("estimated_mean: arm has not been pulled");
  return stats_.observed_sum(arm) / n;
}

double TpUcbFrG::confidence_term(int arm, int t) const {
  if (t < 2) throw std::invalid_argument("confidence_term: t must be >= 2");
  const std::int64_t n = stats_.pulls(arm);
  if (n == 0) throw std::logic_error("confidence_term: arm has not been pulled");
  const double log_term = std::log(std::max(t - 1, 1));
  return frg_confidence(max_rewards_[arm], phi_, ey_, ic_, n, log_term);
}

int TpUcbFrG::select_arm(int t) {
  const int K = stats_.num_arms();
  if (t <= K) return t - 1;
  int best = 0;
  double best_u = -std::numeric_limits<double>::infinity();
  for (int arm = 0; arm < K; ++arm) {
    double u = estimated_mean(arm) + confidence_term(arm, t);
    if (u > best_u) {
      best_u = u;
      best = arm;
    }
  }
  return best;
}

Ucb1::Ucb1(std::vector<double> max_rewards, int tau_max, std::string name)
    : name_(std::move(name)), stats_(static_cast<int>(max_rewards.size()), tau_max) {
  r_max_ = 0.0;
  for (double r : max_rewards) r_max_ = std::max(r_max_, r);
}

int Ucb1::select_arm(int t) {
  const int K = stats_.num_arms();
  if (t <= K) return t - 1;
  const double lt = std::log(static_cast<double>(t));
  int best = 0;
  double best_u = -std::numeric_limits<double>::infinity();
  for (int arm = 0; arm < K; ++arm) {
    const std::int64_t n = stats_.pulls(arm);
    double u = stats_.observed_sum(arm) / n + r_max_ * std::sqrt(2.0 * lt / n);
    if (u > best_u) {
      best_u = u;
      best = arm;
    }
  }
  return best;
}

DelayedUcb1::DelayedUcb1(std::vector<double> max_rewards, int tau_max, std::string name)
    : name_(std::move(name)), stats_(static_cast<int>(max_rewards.size()), tau_max) {
  r_max_ = 0.0;
  for (double r : max_rewards) r_max_ = std::max(r_max_, r);
}

int DelayedUcb1::select_arm(int t) {
  const int K = stats_.num_arms();
  if (t <= K) return t - 1;
  const double lt = std::log(static_cast<double>(t));
  int best = 0;
  double best_u = -std::numeric_limits<double>::infinity();
  for (int arm = 0; arm < K; ++arm) {
    const std::int64_t n = stats_.completed_pulls(arm);
    double u = n == 0 ? std::numeric_limits<double>::infinity()
                      : stats_.completed_sum(arm) / n + r_max_ * std::sqrt(2.0 * lt / n);
    if (u > best_u) {
      best_u = u;
      best = arm;
    }
  }
  return best;
}

std::unique_ptr<Policy> make_tp_ucb_fr_g(std::vector<double> max_rewards, int tau_max,
                                         int alpha_est, SpreadPmf assumed,
                                         std::string name) {
  return std::make_unique<TpUcbFrG>(std::move(max_rewards), tau_max, alpha_est,
                                    std::move(assumed), std::move(name));
}

std::unique_ptr<Policy> make_tp_ucb_fr(std::vector<double> max_rewards, int tau_max,
                                       int alpha_est, std::string name) {
  if (name.empty()) name = "TP-UCB-FR(" + std::to_string(alpha_est) + ")";
  return std::make_unique<TpUcbFrG>(std::move(max_rewards), tau_max, alpha_est,
                                    uniform_spread(alpha_est), std::move(name));
}

std::unique_ptr<Policy> make_ucb1(std::vector<double> max_rewards, int tau_max) {
  return std::make_unique<Ucb1>(std::move(max_rewards), tau_max);
}

std::unique_ptr<Policy> make_delayed_ucb1(std::vector<double> max_rewards, int tau_max) {
  return std::make_unique<DelayedUcb1>(std::move(max_rewards), tau_max);
}

std::string default_policy_name(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicySpec::Kind::ucb1: return "UCB1";
    case PolicySpec::Kind::delayed_ucb1: return "Delayed-UCB1";
    case PolicySpec::Kind::tp_ucb_fr:
      return "TP-UCB-FR(" + std::to_string(spec.alpha_est) + ")";
    case PolicySpec::Kind::tp_ucb_fr_g: {
      std::string dist = spec.distribution ? dist_label(*spec.distribution) : "uniform";
      return "TP-UCB-FR-G(" + std::to_string(spec.alpha_est) + ", " + dist + ")";
    }
  }
  return "?";
}

std::unique_ptr<Policy> build_policy(const PolicySpec& spec, const EnvironmentConfig& env) {
  std::vector<double> max_rewards;
  max_rewards.reserve(env.arms.size());
  for (const auto& arm : env.arms) max_rewards.push_back(arm.max_reward);
  std::string name = spec.display_name.empty() ? default_policy_name(spec) : spec.display_name;

  switch (spec.kind) {
    case PolicySpec::Kind::ucb1:
      return std::make_unique<Ucb1>(std::move(max_rewards), env.tau_max, std::move(name));
    case PolicySpec::Kind::delayed_ucb1:
      return std::make_unique<DelayedUcb1>(std::move(max_rewards), env.tau_max,
                                           std::move(name));
    case PolicySpec::Kind::tp_ucb_fr:
      return make_tp_ucb_fr(std::move(max_rewards), env.tau_max, spec.alpha_est,
                            std::move(name));
    case PolicySpec::Kind::tp_ucb_fr_g: {
      DistSpec dist = spec.distribution.value_or(DistSpec{});
      return make_tp_ucb_fr_g(std::move(max_rewards), env.tau_max, spec.alpha_est,
                              make_spread(dist, spec.alpha_est), std::move(name));
    }
  }
  throw std::invalid_argument("build_policy: bad kind");
}

}  // namespace tpmab
