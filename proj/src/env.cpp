#include "tpmab/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tpmab/rng.hpp"

namespace tpmab {

void validate(const EnvironmentConfig& cfg) {
  if (cfg.num_arms < 1) throw std::invalid_argument("env: num_arms must be >= 1");
  if (cfg.tau_max < 1) throw std::invalid_argument("env: tau_max must be >= 1");
  if (cfg.alpha < 1) throw std::invalid_argument("env: alpha must be >= 1");
  if (cfg.tau_max % cfg.alpha != 0)
    throw std::invalid_argument("env: alpha must divide tau_max");
  if (static_cast<int>(cfg.arms.size()) != cfg.num_arms)
    throw std::invalid_argument("env: arms list does not match num_arms");
  for (int i = 0; i < cfg.num_arms; ++i) {
    const auto& arm = cfg.arms[i];
    if (!(arm.max_reward > 0.0))
      throw std::invalid_argument("env: arm " + std::to_string(i) +
                                  " max_reward must be positive");
    if (const auto* beta = std::get_if<BetaScaledSampler>(&arm.sampler)) {
      if (beta->a.size() != cfg.alpha || beta->b.size() != cfg.alpha)
        throw std::invalid_argument("env: arm " + std::to_string(i) +
                                    " beta parameter vectors must have length alpha");
      if ((beta->a <= 0.0).any() || (beta->b <= 0.0).any())
        throw std::invalid_argument("env: arm " + std::to_string(i) +
                                    " beta parameters must be positive");
    } else if (const auto* trace = std::get_if<TraceSampler>(&arm.sampler)) {
      if (!trace->records || trace->records->empty())
        throw std::invalid_argument("env: arm " + std::to_string(i) +
                                    " has no trace records");
    }
  }
}

double true_mean(const EnvironmentConfig& cfg, int arm) {
  if (arm < 0 || arm >= cfg.num_arms)
    throw std::invalid_argument("true_mean: arm index out of range");
  const auto& spec = cfg.arms[arm];
  if (std::holds_alternative<UniformScaledSampler>(spec.sampler)) {
    return spec.max_reward / 2.0;  // alpha groups, each (max/alpha) * 1/2
  }
  if (const auto* beta = std::get_if<BetaScaledSampler>(&spec.sampler)) {
    double s = (beta->a / (beta->a + beta->b)).sum();
    return spec.max_reward / cfg.alpha * s;
  }
  const auto& recs = *std::get<TraceSampler>(spec.sampler).records;
  double total = 0.0;
  for (const auto& r : recs) total += r.sum();
  return total / static_cast<double>(recs.size());
}

Environment::Environment(EnvironmentConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  ring_.resize(cfg_.tau_max);
  for (auto& slot : ring_) slot.rewards = Eigen::ArrayXd::Zero(cfg_.tau_max);
  n_pulls_.assign(cfg_.num_arms, 0);
}

const Eigen::ArrayXd& Environment::sample_pull(int arm, int t) {
  if (arm < 0 || arm >= cfg_.num_arms)
    throw std::invalid_argument("sample_pull: arm index out of range");
  if (t != last_round_ + 1)
    throw std::logic_error("sample_pull: pulls must be registered once per round");
  last_round_ = t;

  const int alpha = cfg_.alpha;
  const int phi = cfg_.tau_max / alpha;
  const auto& spec = cfg_.arms[arm];
  const std::int64_t n = n_pulls_[arm]++;

  PullSlot& slot = ring_[(t - 1) % cfg_.tau_max];
  slot.round = t;
  slot.arm = arm;

  if (const auto* trace = std::get_if<TraceSampler>(&spec.sampler)) {
    const auto& recs = *trace->records;
    auto stream = substream(cfg_.seed, static_cast<std::uint64_t>(arm), n, 0);
    auto idx = static_cast<std::size_t>(stream.uniform() * recs.size());
    if (idx >= recs.size()) idx = recs.size() - 1;
    slot.rewards = recs[idx];
    return slot.rewards;
  }

  const double cap = spec.max_reward / alpha;
  for (int k = 0; k < alpha; ++k) {
    auto stream = substream(cfg_.seed, static_cast<std::uint64_t>(arm), n,
                            static_cast<std::uint64_t>(k) + 1);
    double z;
    if (const auto* beta = std::get_if<BetaScaledSampler>(&spec.sampler)) {
      z = cap * stream.beta(beta->a[k], beta->b[k]);
    } else {
      z = cap * stream.uniform();
    }
    const double per_round = z / phi;
    for (int j = 0; j < phi; ++j) slot.rewards[k * phi + j] = per_round;
  }
  return slot.rewards;
}

void Environment::observe(int t, ObservationBatch& out) const {
  out.round = t;
  out.items.clear();
  const int first = std::max(1, t - cfg_.tau_max + 1);
  for (int h = first; h <= t; ++h) {
    const PullSlot& slot = ring_[(h - 1) % cfg_.tau_max];
    if (slot.round != h) continue;
    out.items.push_back({slot.arm, h, slot.rewards[t - h]});
  }
}

ObservationBatch Environment::observe(int t) const {
  ObservationBatch out;
  observe(t, out);
  return out;
}

EnvironmentConfig make_setting1(int alpha_true, int tau_max, int K) {
  static const double zeta[] = {1, 3, 6, 9, 12, 15, 18, 21, 22, 23};
  EnvironmentConfig cfg;
  cfg.num_arms = K;
  cfg.tau_max = tau_max;
  cfg.alpha = alpha_true;
  cfg.arms.reserve(K);
  for (int i = 0; i < K; ++i) {
    double scale = i < 10 ? zeta[i] : static_cast<double>(i + 1);
    cfg.arms.push_back({100.0 * scale, UniformScaledSampler{}});
  }
  validate(cfg);
  return cfg;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "uniform") return Scenario::uniform;
  if (name == "late") return Scenario::late;
  if (name == "early") return Scenario::early;
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (expected uniform, late or early)");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::uniform: return "uniform";
    case Scenario::late: return "late";
    case Scenario::early: return "early";
  }
  return "?";
}

Eigen::ArrayXd setting2_ramp(int alpha) {
  Eigen::ArrayXd v(alpha);
  for (int k = 0; k < alpha; ++k)
    v[k] = std::min(2.0 * (k + 1), static_cast<double>(alpha));
  return v;
}

EnvironmentConfig make_setting2(int configuration, Scenario scenario) {
  int tau_max, alpha;
  switch (configuration) {
    case 1: tau_max = 100; alpha = 10; break;
    case 2: tau_max = 100; alpha = 50; break;
    case 3: tau_max = 200; alpha = 20; break;
    case 4: tau_max = 200; alpha = 100; break;
    default:
      throw std::invalid_argument("make_setting2: configuration must be in 1..4");
  }
  Eigen::ArrayXd a, b;
  if (scenario == Scenario::uniform) {
    a = Eigen::ArrayXd::Ones(alpha);
    b = Eigen::ArrayXd::Ones(alpha);
  } else {
    Eigen::ArrayXd ramp = setting2_ramp(alpha);
    if (scenario == Scenario::late) {
      a = ramp;
      b = ramp.reverse();
    } else {
      a = ramp.reverse();
      b = ramp;
    }
  }
  EnvironmentConfig cfg = make_setting1(alpha, tau_max, 10);
  for (auto& arm : cfg.arms) arm.sampler = BetaScaledSampler{a, b};
  validate(cfg);
  return cfg;
}

namespace {

EnvironmentConfig trace_env_from_stream(std::istream& in, const std::string& path,
                                        int expect_K, int expect_tau) {
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error(path + ": empty trace file (zero records)");
  int K = 0, tau = 0;
  if (std::sscanf(header.c_str(), "tpmab-trace v1 K=%d tau_max=%d", &K, &tau) != 2)
    throw std::runtime_error(path + ": bad trace header '" + header + "'");
  if (expect_K > 0 && expect_K != K)
    throw std::runtime_error(path + ": header K=" + std::to_string(K) +
                             " does not match expected " + std::to_string(expect_K));
  if (expect_tau > 0 && expect_tau != tau)
    throw std::runtime_error(path + ": header tau_max=" + std::to_string(tau) +
                             " does not match expected " + std::to_string(expect_tau));
  if (K < 1 || tau < 1) throw std::runtime_error(path + ": bad K or tau_max in header");

  std::vector<std::vector<Eigen::ArrayXd>> per_arm(K);
  std::string line;
  int line_no = 1;
  std::size_t n_records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ss, field, ',')) {
      try {
        vals.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + field + "'");
      }
    }
    if (static_cast<int>(vals.size()) != tau + 1)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(tau + 1) + " fields, got " +
                               std::to_string(vals.size()));
    int arm = static_cast<int>(vals[0]);
    if (arm < 0 || arm >= K || vals[0] != arm)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": arm index out of range");
    Eigen::ArrayXd rec(tau);
    for (int j = 0; j < tau; ++j) {
      if (vals[j + 1] < 0.0)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": negative reward");
      rec[j] = vals[j + 1];
    }
    per_arm[arm].push_back(std::move(rec));
    ++n_records;
  }
  if (n_records == 0) throw std::runtime_error(path + ": trace file has zero records");

  EnvironmentConfig cfg;
  cfg.num_arms = K;
  cfg.tau_max = tau;
  cfg.alpha = 1;  // replayed vectors carry their own shape
  for (int i = 0; i < K; ++i) {
    if (per_arm[i].empty())
      throw std::runtime_error(path + ": arm " + std::to_string(i) + " has zero records");
    double max_cum = 0.0;
    for (const auto& r : per_arm[i]) max_cum = std::max(max_cum, r.sum());
    if (!(max_cum > 0.0))
      throw std::runtime_error(path + ": arm " + std::to_string(i) +
                               " has zero total reward in every record");
    auto recs = std::make_shared<std::vector<Eigen::ArrayXd>>(std::move(per_arm[i]));
    cfg.arms.push_back({max_cum, TraceSampler{std::move(recs)}});
  }
  validate(cfg);
  return cfg;
}

}  // namespace

EnvironmentConfig make_trace_env(const std::string& path, int K, int tau_max) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open trace file");
  return trace_env_from_stream(in, path, K, tau_max);
}

EnvironmentConfig make_trace_env(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open trace file");
  return trace_env_from_stream(in, path, 0, 0);
}

}  // namespace tpmab
