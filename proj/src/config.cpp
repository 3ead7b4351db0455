#include "tpmab/config.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace tpmab {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

double require_number(const nlohmann::json& doc, const char* field, const std::string& where) {
  if (!doc.contains(field)) fail(where, std::string("missing field '") + field + "'");
  if (!doc[field].is_number()) fail(where, std::string("field '") + field + "' must be a number");
  return doc[field].get<double>();
}

std::string require_string(const nlohmann::json& doc, const char* field,
                           const std::string& where) {
  if (!doc.contains(field)) fail(where, std::string("missing field '") + field + "'");
  if (!doc[field].is_string()) fail(where, std::string("field '") + field + "' must be a string");
  return doc[field].get<std::string>();
}

}  // namespace

DistSpec parse_dist_spec(const nlohmann::json& doc) {
  const std::string where = "distribution";
  if (!doc.is_object()) fail(where, "must be an object");
  const std::string kind = require_string(doc, "kind", where);
  DistSpec spec;
  if (kind == "uniform") {
    spec.kind = DistSpec::Kind::uniform;
  } else if (kind == "beta_binomial") {
    spec.kind = DistSpec::Kind::beta_binomial;
    spec.a = require_number(doc, "a", where);
    spec.b = require_number(doc, "b", where);
  } else if (kind == "zipfian") {
    spec.kind = DistSpec::Kind::zipfian;
    spec.s = require_number(doc, "s", where);
  } else if (kind == "boltzmann") {
    spec.kind = DistSpec::Kind::boltzmann;
    spec.lambda = require_number(doc, "lambda", where);
  } else if (kind == "hypergeometric") {
    spec.kind = DistSpec::Kind::hypergeometric;
    spec.n_pop = static_cast<int>(require_number(doc, "n_pop", where));
  } else if (kind == "named") {
    spec.kind = DistSpec::Kind::named;
    spec.name = require_string(doc, "name", where);
  } else {
    fail(where, "unknown kind '" + kind + "'");
  }
  return spec;
}

nlohmann::json to_json(const DistSpec& spec) {
  nlohmann::json doc;
  switch (spec.kind) {
    case DistSpec::Kind::uniform: doc["kind"] = "uniform"; break;
    case DistSpec::Kind::beta_binomial:
      doc["kind"] = "beta_binomial";
      doc["a"] = spec.a;
      doc["b"] = spec.b;
      break;
    case DistSpec::Kind::zipfian:
      doc["kind"] = "zipfian";
      doc["s"] = spec.s;
      break;
    case DistSpec::Kind::boltzmann:
      doc["kind"] = "boltzmann";
      doc["lambda"] = spec.lambda;
      break;
    case DistSpec::Kind::hypergeometric:
      doc["kind"] = "hypergeometric";
      doc["n_pop"] = spec.n_pop;
      break;
    case DistSpec::Kind::named:
      doc["kind"] = "named";
      doc["name"] = spec.name;
      break;
  }
  return doc;
}

PolicySpec parse_policy_spec(const nlohmann::json& doc) {
  const std::string where = "policy";
  if (!doc.is_object()) fail(where, "must be an object");
  const std::string kind = require_string(doc, "kind", where);
  PolicySpec spec;
  if (kind == "ucb1") {
    spec.kind = PolicySpec::Kind::ucb1;
  } else if (kind == "delayed_ucb1") {
    spec.kind = PolicySpec::Kind::delayed_ucb1;
  } else if (kind == "tp_ucb_fr") {
    spec.kind = PolicySpec::Kind::tp_ucb_fr;
    spec.alpha_est = static_cast<int>(require_number(doc, "alpha_est", where));
  } else if (kind == "tp_ucb_fr_g") {
    spec.kind = PolicySpec::Kind::tp_ucb_fr_g;
    spec.alpha_est = static_cast<int>(require_number(doc, "alpha_est", where));
    if (!doc.contains("distribution"))
      fail(where, "tp_ucb_fr_g requires a 'distribution' field");
    spec.distribution = parse_dist_spec(doc["distribution"]);
  } else {
    fail(where, "unknown kind '" + kind + "'");
  }
  if (doc.contains("name")) spec.display_name = doc["name"].get<std::string>();
  return spec;
}

nlohmann::json to_json(const PolicySpec& spec) {
  nlohmann::json doc;
  switch (spec.kind) {
    case PolicySpec::Kind::ucb1: doc["kind"] = "ucb1"; break;
    case PolicySpec::Kind::delayed_ucb1: doc["kind"] = "delayed_ucb1"; break;
    case PolicySpec::Kind::tp_ucb_fr:
      doc["kind"] = "tp_ucb_fr";
      doc["alpha_est"] = spec.alpha_est;
      break;
    case PolicySpec::Kind::tp_ucb_fr_g:
      doc["kind"] = "tp_ucb_fr_g";
      doc["alpha_est"] = spec.alpha_est;
      doc["distribution"] = to_json(spec.distribution.value_or(DistSpec{}));
      break;
  }
  if (!spec.display_name.empty()) doc["name"] = spec.display_name;
  return doc;
}

EnvironmentConfig parse_environment(const nlohmann::json& doc, const std::string& base_dir) {
  const std::string where = "environment";
  if (!doc.is_object()) fail(where, "must be an object");
  const std::string kind = require_string(doc, "kind", where);
  if (kind == "setting1") {
    int alpha = doc.value("alpha", 20);
    int tau = doc.value("tau_max", 100);
    int K = doc.value("K", 10);
    return make_setting1(alpha, tau, K);
  }
  if (kind == "setting2") {
    int configuration = static_cast<int>(require_number(doc, "configuration", where));
    Scenario scenario = parse_scenario(require_string(doc, "scenario", where));
    return make_setting2(configuration, scenario);
  }
  if (kind == "trace") {
    std::string path = require_string(doc, "path", where);
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    if (doc.contains("K") || doc.contains("tau_max")) {
      int K = static_cast<int>(require_number(doc, "K", where));
      int tau = static_cast<int>(require_number(doc, "tau_max", where));
      return make_trace_env(p.string(), K, tau);
    }
    return make_trace_env(p.string());
  }
  if (kind == "custom") {
    EnvironmentConfig cfg;
    cfg.tau_max = static_cast<int>(require_number(doc, "tau_max", where));
    cfg.alpha = static_cast<int>(require_number(doc, "alpha", where));
    if (!doc.contains("arms") || !doc["arms"].is_array())
      fail(where, "custom environment requires an 'arms' array");
    for (const auto& arm_doc : doc["arms"]) {
      ArmSpec arm;
      arm.max_reward = require_number(arm_doc, "max_reward", where + ".arms");
      const std::string sampler = arm_doc.value("sampler", std::string("uniform_scaled"));
      if (sampler == "uniform_scaled") {
        arm.sampler = UniformScaledSampler{};
      } else if (sampler == "beta_scaled") {
        auto a = arm_doc.at("a").get<std::vector<double>>();
        auto b = arm_doc.at("b").get<std::vector<double>>();
        BetaScaledSampler bs;
        bs.a = Eigen::Map<const Eigen::ArrayXd>(a.data(), a.size());
        bs.b = Eigen::Map<const Eigen::ArrayXd>(b.data(), b.size());
        arm.sampler = std::move(bs);
      } else {
        fail(where + ".arms", "unknown sampler '" + sampler + "'");
      }
      cfg.arms.push_back(std::move(arm));
    }
    cfg.num_arms = static_cast<int>(cfg.arms.size());
    validate(cfg);
    return cfg;
  }
  fail(where, "unknown kind '" + kind + "'");
}

nlohmann::json environment_to_json(const EnvironmentConfig& cfg) {
  nlohmann::json doc;
  doc["kind"] = "custom";
  doc["tau_max"] = cfg.tau_max;
  doc["alpha"] = cfg.alpha;
  auto& arms = doc["arms"] = nlohmann::json::array();
  for (const auto& arm : cfg.arms) {
    nlohmann::json a;
    a["max_reward"] = arm.max_reward;
    if (std::holds_alternative<UniformScaledSampler>(arm.sampler)) {
      a["sampler"] = "uniform_scaled";
    } else if (const auto* bs = std::get_if<BetaScaledSampler>(&arm.sampler)) {
      a["sampler"] = "beta_scaled";
      a["a"] = std::vector<double>(bs->a.begin(), bs->a.end());
      a["b"] = std::vector<double>(bs->b.begin(), bs->b.end());
    } else {
      a["sampler"] = "trace";
      a["records"] = std::get<TraceSampler>(arm.sampler).records->size();
    }
    arms.push_back(std::move(a));
  }
  return doc;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::string& base_dir,
                                         const ConfigOverrides& overrides) {
  if (!doc.is_object()) fail("root", "config must be a JSON object");
  if (!doc.contains("environment")) fail("root", "missing 'environment'");
  if (!doc.contains("policies") || !doc["policies"].is_array() || doc["policies"].empty())
    fail("root", "missing or empty 'policies' array");

  ExperimentConfig cfg;
  cfg.environment = parse_environment(doc["environment"], base_dir);
  for (const auto& pol : doc["policies"]) cfg.policies.push_back(parse_policy_spec(pol));
  cfg.horizon = static_cast<std::int64_t>(require_number(doc, "horizon", "root"));
  cfg.num_runs = doc.value("runs", 1);
  cfg.base_seed = doc.value("seed", std::uint64_t{0});
  cfg.checkpoint_stride = doc.value("checkpoint_stride", 100);
  cfg.workers = doc.value("workers", 0);
  if (doc.contains("output") && doc["output"].is_object())
    cfg.output_dir = doc["output"].value("dir", std::string());

  if (overrides.horizon) cfg.horizon = *overrides.horizon;
  if (overrides.runs) cfg.num_runs = *overrides.runs;
  if (overrides.seed) cfg.base_seed = *overrides.seed;
  if (overrides.workers) cfg.workers = *overrides.workers;

  validate(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  const std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_experiment_config(doc, base_dir, overrides);
}

DistSpec parse_dist_string(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto split_args = [&args]() {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos < args.size()) {
      auto comma = args.find(',', pos);
      if (comma == std::string::npos) comma = args.size();
      vals.push_back(std::stod(args.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return vals;
  };

  DistSpec spec;
  try {
    if (kind == "uniform") {
      spec.kind = DistSpec::Kind::uniform;
    } else if (kind == "named") {
      spec.kind = DistSpec::Kind::named;
      spec.name = args;
    } else if (kind == "beta_binomial") {
      auto v = split_args();
      if (v.size() != 2) throw std::invalid_argument("expected a,b");
      spec.kind = DistSpec::Kind::beta_binomial;
      spec.a = v[0];
      spec.b = v[1];
    } else if (kind == "zipfian") {
      auto v = split_args();
      if (v.size() != 1) throw std::invalid_argument("expected s");
      spec.kind = DistSpec::Kind::zipfian;
      spec.s = v[0];
    } else if (kind == "boltzmann") {
      auto v = split_args();
      if (v.size() != 1) throw std::invalid_argument("expected lambda");
      spec.kind = DistSpec::Kind::boltzmann;
      spec.lambda = v[0];
    } else if (kind == "hypergeometric") {
      auto v = split_args();
      if (v.size() != 1) throw std::invalid_argument("expected n_pop");
      spec.kind = DistSpec::Kind::hypergeometric;
      spec.n_pop = static_cast<int>(v[0]);
    } else {
      // a bare Table-style preset name, e.g. "begin"
      spec.kind = DistSpec::Kind::named;
      spec.name = text;
    }
  } catch (const std::exception& e) {
    throw std::invalid_argument("cannot parse distribution spec '" + text + "': " + e.what());
  }
  return spec;
}

}  // namespace tpmab
