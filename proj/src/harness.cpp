#include "tpmab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace tpmab {

void validate(const ExperimentConfig& cfg) {
  validate(cfg.environment);
  if (cfg.horizon < cfg.environment.num_arms)
    throw std::invalid_argument("experiment: horizon must be >= num_arms");
  if (cfg.num_runs < 1) throw std::invalid_argument("experiment: num_runs must be >= 1");
  if (cfg.checkpoint_stride < 1)
    throw std::invalid_argument("experiment: checkpoint_stride must be >= 1");
  if (cfg.policies.empty())
    throw std::invalid_argument("experiment: at least one policy required");
  for (const auto& spec : cfg.policies) {
    if (spec.kind == PolicySpec::Kind::tp_ucb_fr ||
        spec.kind == PolicySpec::Kind::tp_ucb_fr_g) {
      if (spec.alpha_est < 1 || cfg.environment.tau_max % spec.alpha_est != 0)
        throw std::invalid_argument("experiment: policy '" + default_policy_name(spec) +
                                    "' alpha_est must divide tau_max=" +
                                    std::to_string(cfg.environment.tau_max));
    }
  }
}

RegretTrace run_episode(const EnvironmentConfig& env_cfg, const PolicyFactory& make_policy,
                        std::int64_t horizon, std::uint64_t seed, int stride) {
  if (horizon < env_cfg.num_arms)
    throw std::invalid_argument("run_episode: horizon must be >= num_arms");
  if (stride < 1) throw std::invalid_argument("run_episode: stride must be >= 1");

  EnvironmentConfig seeded = env_cfg;
  seeded.seed = seed;
  Environment env(seeded);
  auto policy = make_policy(seeded);

  const int K = seeded.num_arms;
  Eigen::ArrayXd gaps(K);
  double mu_star = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < K; ++i) mu_star = std::max(mu_star, true_mean(seeded, i));
  for (int i = 0; i < K; ++i) gaps[i] = mu_star - true_mean(seeded, i);

  RegretTrace trace;
  trace.rounds.reserve(static_cast<std::size_t>(horizon / stride) + 1);
  std::vector<double> values;
  values.reserve(trace.rounds.capacity());

  double regret = 0.0;
  double regret_area = 0.0;
  ObservationBatch batch;
  batch.items.reserve(seeded.tau_max);

  for (std::int64_t t = 1; t <= horizon; ++t) {
    const int ti = static_cast<int>(t);
    const int arm = policy->select_arm(ti);
    env.sample_pull(arm, ti);
    env.observe(ti, batch);
    policy->update(batch);
    regret += gaps[arm];
    regret_area += regret;
    if (t % stride == 0 || t == horizon) {
      trace.rounds.push_back(t);
      values.push_back(regret);
    }
  }

  trace.values = Eigen::Map<const Eigen::ArrayXd>(values.data(), values.size());
  trace.final_regret = regret;
  trace.time_avg = regret_area / static_cast<double>(horizon);
  return trace;
}

RegretTrace run_episode(const EnvironmentConfig& env_cfg, const PolicySpec& spec,
                        std::int64_t horizon, std::uint64_t seed, int stride) {
  return run_episode(
      env_cfg, [&spec](const EnvironmentConfig& e) { return build_policy(spec, e); },
      horizon, seed, stride);
}

namespace {

struct Summary {
  double mean;
  double ci_half;
};

Summary summarize(const Eigen::ArrayXd& samples) {
  const auto n = samples.size();
  const double mean = samples.mean();
  if (n < 2) return {mean, 0.0};
  const double var = (samples - mean).square().sum() / static_cast<double>(n - 1);
  return {mean, 1.96 * std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

AggregateResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const int n_policies = static_cast<int>(cfg.policies.size());
  const int n_runs = cfg.num_runs;

  std::vector<std::vector<RegretTrace>> traces(n_policies,
                                               std::vector<RegretTrace>(n_runs));

  const int total = n_policies * n_runs;
  int workers = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, total);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= total || failed.load()) break;
      const int p = task / n_runs;
      const int r = task % n_runs;
      try {
        traces[p][r] = run_episode(cfg.environment, cfg.policies[p], cfg.horizon,
                                   cfg.base_seed + static_cast<std::uint64_t>(r),
                                   cfg.checkpoint_stride);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true))
          error_message = std::string("run ") + std::to_string(r) + " of policy '" +
                          default_policy_name(cfg.policies[p]) + "' failed: " + e.what();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("experiment aborted: " + error_message);

  AggregateResult result;
  result.horizon = cfg.horizon;
  result.num_runs = n_runs;
  result.base_seed = cfg.base_seed;
  result.checkpoint_stride = cfg.checkpoint_stride;
  result.policies.reserve(n_policies);

  for (int p = 0; p < n_policies; ++p) {
    PolicyAggregate agg;
    agg.name = cfg.policies[p].display_name.empty()
                   ? default_policy_name(cfg.policies[p])
                   : cfg.policies[p].display_name;
    agg.rounds = traces[p][0].rounds;
    const auto n_points = static_cast<Eigen::Index>(agg.rounds.size());
    Eigen::MatrixXd values(n_runs, n_points);
    Eigen::ArrayXd finals(n_runs), time_avgs(n_runs);
    for (int r = 0; r < n_runs; ++r) {
      values.row(r) = traces[p][r].values.matrix().transpose();
      finals[r] = traces[p][r].final_regret;
      time_avgs[r] = traces[p][r].time_avg;
    }
    const Eigen::RowVectorXd col_mean = values.colwise().mean();
    agg.mean = col_mean.transpose().array();
    if (n_runs > 1) {
      Eigen::RowVectorXd ss =
          (values.rowwise() - col_mean).array().square().matrix().colwise().sum();
      Eigen::ArrayXd var = ss.transpose().array() / static_cast<double>(n_runs - 1);
      agg.ci_half = 1.96 * (var / static_cast<double>(n_runs)).sqrt();
    } else {
      agg.ci_half = Eigen::ArrayXd::Zero(n_points);
    }
    auto fs = summarize(finals);
    auto ts = summarize(time_avgs);
    agg.final_mean = fs.mean;
    agg.final_ci = fs.ci_half;
    agg.time_avg_mean = ts.mean;
    agg.time_avg_ci = ts.ci_half;
    result.policies.push_back(std::move(agg));
  }
  return result;
}

bool operator==(const PolicyAggregate& a, const PolicyAggregate& b) {
  return a.name == b.name && a.rounds == b.rounds && (a.mean == b.mean).all() &&
         (a.ci_half == b.ci_half).all() && a.final_mean == b.final_mean &&
         a.final_ci == b.final_ci && a.time_avg_mean == b.time_avg_mean &&
         a.time_avg_ci == b.time_avg_ci;
}

bool operator==(const AggregateResult& a, const AggregateResult& b) {
  return a.policies == b.policies && a.horizon == b.horizon && a.num_runs == b.num_runs &&
         a.base_seed == b.base_seed && a.checkpoint_stride == b.checkpoint_stride;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void export_csv(const AggregateResult& result, std::ostream& out) {
  out << "policy_name,t,mean_regret,ci_half_width\n";
  for (const auto& pol : result.policies) {
    const std::string name = csv_quote(pol.name);
    for (std::size_t i = 0; i < pol.rounds.size(); ++i)
      out << name << ',' << pol.rounds[i] << ',' << fmt_double(pol.mean[i]) << ','
          << fmt_double(pol.ci_half[i]) << '\n';
  }
}

void export_csv(const AggregateResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  export_csv(result, out);
  if (!out) throw std::runtime_error(path + ": write failed");
}

AggregateResult parse_results_csv(std::istream& in) {
  static const char* kColumns[] = {"policy_name", "t", "mean_regret", "ci_half_width"};
  std::string line;
  std::vector<std::string> header;
  if (std::getline(in, line)) header = csv_split(line);
  for (int c = 0; c < 4; ++c) {
    if (static_cast<int>(header.size()) <= c || header[c] != kColumns[c])
      throw std::runtime_error(std::string("results csv: missing column '") + kColumns[c] +
                               "' (expected header policy_name,t,mean_regret,ci_half_width)");
  }
  AggregateResult result;
  PolicyAggregate* cur = nullptr;
  std::vector<double> means, cis;
  auto flush = [&] {
    if (!cur) return;
    cur->mean = Eigen::Map<const Eigen::ArrayXd>(means.data(), means.size());
    cur->ci_half = Eigen::Map<const Eigen::ArrayXd>(cis.data(), cis.size());
    means.clear();
    cis.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = csv_split(line);
    if (fields.size() != 4)
      throw std::runtime_error("results csv: expected 4 fields, got " +
                               std::to_string(fields.size()));
    if (!cur || cur->name != fields[0]) {
      flush();
      result.policies.push_back({});
      cur = &result.policies.back();
      cur->name = fields[0];
    }
    cur->rounds.push_back(std::stoll(fields[1]));
    means.push_back(std::stod(fields[2]));
    cis.push_back(std::stod(fields[3]));
  }
  flush();
  if (result.policies.empty()) throw std::runtime_error("results csv: no data rows");
  return result;
}

AggregateResult parse_results_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return parse_results_csv(in);
}

void export_json(const AggregateResult& result, const std::string& config_echo,
                 const std::string& path) {
  nlohmann::json doc;
  doc["format"] = "tpmab-results";
  doc["version"] = 1;
  doc["horizon"] = result.horizon;
  doc["runs"] = result.num_runs;
  doc["base_seed"] = result.base_seed;
  doc["checkpoint_stride"] = result.checkpoint_stride;
  auto& seeds = doc["seeds"] = nlohmann::json::array();
  for (int r = 0; r < result.num_runs; ++r)
    seeds.push_back(result.base_seed + static_cast<std::uint64_t>(r));
  if (!config_echo.empty()) {
    try {
      doc["config"] = nlohmann::json::parse(config_echo);
    } catch (const nlohmann::json::parse_error&) {
      doc["config"] = config_echo;
    }
  }
  auto& pols = doc["policies"] = nlohmann::json::array();
  for (const auto& pol : result.policies) {
    nlohmann::json p;
    p["name"] = pol.name;
    p["rounds"] = pol.rounds;
    p["mean_regret"] = std::vector<double>(pol.mean.begin(), pol.mean.end());
    p["ci_half_width"] = std::vector<double>(pol.ci_half.begin(), pol.ci_half.end());
    p["final_mean"] = pol.final_mean;
    p["final_ci"] = pol.final_ci;
    p["time_avg_mean"] = pol.time_avg_mean;
    p["time_avg_ci"] = pol.time_avg_ci;
    pols.push_back(std::move(p));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

AggregateResult parse_results_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  nlohmann::json doc = nlohmann::json::parse(in);
  AggregateResult result;
  result.horizon = doc.value("horizon", std::int64_t{0});
  result.num_runs = doc.value("runs", 0);
  result.base_seed = doc.value("base_seed", std::uint64_t{0});
  result.checkpoint_stride = doc.value("checkpoint_stride", 0);
  for (const auto& p : doc.at("policies")) {
    PolicyAggregate pol;
    pol.name = p.at("name").get<std::string>();
    pol.rounds = p.at("rounds").get<std::vector<std::int64_t>>();
    auto means = p.at("mean_regret").get<std::vector<double>>();
    auto cis = p.at("ci_half_width").get<std::vector<double>>();
    pol.mean = Eigen::Map<const Eigen::ArrayXd>(means.data(), means.size());
    pol.ci_half = Eigen::Map<const Eigen::ArrayXd>(cis.data(), cis.size());
    pol.final_mean = p.value("final_mean", 0.0);
    pol.final_ci = p.value("final_ci", 0.0);
    pol.time_avg_mean = p.value("time_avg_mean", 0.0);
    pol.time_avg_ci = p.value("time_avg_ci", 0.0);
    result.policies.push_back(std::move(pol));
  }
  return result;
}

std::string summary_table(const AggregateResult& result) {
  std::vector<const PolicyAggregate*> order;
  for (const auto& p : result.policies) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->time_avg_mean < b->time_avg_mean;
  });

  const PolicyAggregate* baseline = nullptr;
  for (const auto& p : result.policies) {
    if (p.name.rfind("TP-UCB-FR(", 0) == 0) {
      baseline = &p;
      break;
    }
  }

  std::ostringstream os;
  os << std::left << std::setw(36) << "policy" << std::right << std::setw(16)
     << "avg regret" << std::setw(14) << "ci95" << std::setw(16) << "final regret";
  if (baseline) os << std::setw(12) << "decrease";
  os << '\n';
  for (const auto* p : order) {
    os << std::left << std::setw(36) << p->name << std::right << std::setw(16)
       << std::setprecision(4) << std::scientific << p->time_avg_mean << std::setw(14)
       << p->time_avg_ci << std::setw(16) << p->final_mean;
    if (baseline) {
      if (p == baseline) {
        os << std::setw(12) << "--";
      } else {
        double dec = 100.0 * (baseline->time_avg_mean - p->time_avg_mean) /
                     baseline->time_avg_mean;
        os << std::setw(11) << std::fixed << std::setprecision(1) << dec << '%';
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tpmab
