#include "tpmab/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace tpmab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

InstanceSummary summarize_instance(const EnvironmentConfig& cfg, SpreadPmf spread) {
  validate(cfg);
  const int alpha = spread.alpha();
  if (cfg.tau_max % alpha != 0)
    throw std::invalid_argument("summarize_instance: spread alpha must divide tau_max");
  InstanceSummary inst{Eigen::ArrayXd(cfg.num_arms), Eigen::ArrayXd(cfg.num_arms),
                       std::move(spread), cfg.tau_max / alpha};
  for (int i = 0; i < cfg.num_arms; ++i) {
    inst.means[i] = true_mean(cfg, i);
    inst.max_rewards[i] = cfg.arms[i].max_reward;
  }
  return inst;
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("kl_bernoulli: p must be in [0,1]");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("kl_bernoulli: q must be in [0,1]");
  if (q == 0.0 || q == 1.0) return p == q ? 0.0 : kInf;
  double result = 0.0;
  if (p > 0.0) result += p * std::log(p / q);
  if (p < 1.0) result += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return result;
}

namespace {

double lower_bound_with_prefactor(const InstanceSummary& inst, double T, double prefactor) {
  if (!(T >= 2.0)) throw std::invalid_argument("lower bound: T must be >= 2");
  const double r_max = inst.r_max();
  const double mu_star = inst.mu_star();
  if (mu_star / r_max >= 1.0 - 1e-15) return kInf;
  const int alpha = inst.spread.alpha();
  double sum = 0.0;
  for (int i = 0; i < inst.means.size(); ++i) {
    const double mu = inst.means[i];
    if (!(mu < mu_star)) continue;
    const double gap = mu_star - mu;
    sum += prefactor * gap / (alpha * kl_bernoulli(mu / r_max, mu_star / r_max));
  }
  return sum * std::log(T);
}

}  // namespace

double lower_bound_curve(const InstanceSummary& inst, double T) {
  const int alpha = inst.spread.alpha();
  const double prefactor = 2.0 / (alpha + 1.0) * expected_index(inst.spread) * alpha *
                           index_of_coincidence(inst.spread);
  return lower_bound_with_prefactor(inst, T, prefactor);
}

double lower_bound_alpha_smooth(const InstanceSummary& inst, double T) {
  return lower_bound_with_prefactor(inst, T, 1.0);
}

double upper_bound_with_moments(const InstanceSummary& inst, double ey, double ic,
                                double T) {
  if (!(T >= 2.0)) throw std::invalid_argument("upper_bound_curve: T must be >= 2");
  const double log_t = std::log(T);
  const double mu_star = inst.mu_star();
  const double phi = inst.phi;
  double leading = 0.0, residual_r = 0.0, residual_gap = 0.0;
  for (int i = 0; i < inst.means.size(); ++i) {
    const double gap = mu_star - inst.means[i];
    if (!(gap > 0.0)) continue;
    const double rbar = inst.max_rewards[i];
    const double s2 = rbar * rbar * ic;
    leading += 4.0 * log_t * s2 / gap *
               (1.0 + std::sqrt(1.0 + gap * phi * ey / (rbar * log_t * ic)));
    residual_r += rbar;
    residual_gap += gap;
  }
  constexpr double pi = 3.14159265358979323846;
  return leading + 2.0 * phi * ey * residual_r + (1.0 + pi * pi / 3.0) * residual_gap;
}

double upper_bound_curve(const InstanceSummary& inst, double T) {
  return upper_bound_with_moments(inst, expected_index(inst.spread),
                                  index_of_coincidence(inst.spread), T);
}

Tightness tightness_condition(const SpreadPmf& spread) {
  const int alpha = spread.alpha();
  const double value = 2.0 / (alpha + 1.0) * expected_index(spread) * alpha *
                       index_of_coincidence(spread);
  // FP noise around the uniform equality case must not flip the comparison.
  return {value, value > 1.0 + 1e-9};
}

std::vector<double> log_spaced_grid(double t_min, double t_max, int points) {
  if (!(t_min >= 2.0)) throw std::invalid_argument("horizon grid: t_min must be >= 2");
  if (!(t_max >= t_min)) throw std::invalid_argument("horizon grid: t_max must be >= t_min");
  if (points < 1) throw std::invalid_argument("horizon grid: points must be >= 1");
  std::vector<double> grid;
  const double llo = std::log(t_min), lhi = std::log(t_max);
  for (int i = 0; i < points; ++i) {
    double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    double t = std::round(std::exp(llo + f * (lhi - llo)));
    if (grid.empty() || t > grid.back()) grid.push_back(t);
  }
  return grid;
}

std::string bounds_csv(const InstanceSummary& inst, const std::vector<double>& t_grid) {
  const int alpha = inst.spread.alpha();
  const double uniform_ey = (alpha + 1.0) / 2.0;
  const double uniform_ic = 1.0 / alpha;
  const double tightness = tightness_condition(inst.spread).value;

  std::string out = "T,lower_bound,upper_bound,upper_bound_uniform,tightness_value\n";
  char buf[160];
  auto field = [&buf](double v) {
    if (!std::isfinite(v)) return std::string();
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (double t : t_grid) {
    std::snprintf(buf, sizeof(buf), "%.0f", t);
    out += buf;
    out += ',' + field(lower_bound_curve(inst, t));
    out += ',' + field(upper_bound_curve(inst, t));
    out += ',' + field(upper_bound_with_moments(inst, uniform_ey, uniform_ic, t));
    out += ',' + field(tightness);
    out += '\n';
  }
  return out;
}

}  // namespace tpmab
