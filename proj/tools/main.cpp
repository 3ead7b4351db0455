#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpmab/bounds.hpp"
#include "tpmab/config.hpp"
#include "tpmab/harness.hpp"
#include "tpmab/presets.hpp"
#include "tpmab/svg.hpp"

namespace fs = std::filesystem;
using namespace tpmab;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    vals.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return vals;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << contents;
  if (!out) throw std::runtime_error(path + ": write failed");
}

int cmd_run(const std::string& config_path, const std::string& preset_name,
            const ConfigOverrides& overrides, std::string out_dir, bool out_dir_given) {
  ExperimentConfig cfg;
  nlohmann::json echo;
  if (!preset_name.empty()) {
    echo = preset_config(preset_name);
    if (preset_name == "trace_demo") {
      // materialize the bundled trace next to the outputs
      fs::create_directories(out_dir);
      const std::string trace_path = (fs::path(out_dir) / "demo.trace").string();
      write_file(trace_path, demo_trace_text());
      echo["environment"]["path"] = "demo.trace";
      cfg = parse_experiment_config(echo, out_dir, overrides);
    } else {
      cfg = parse_experiment_config(echo, "", overrides);
    }
  } else {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file: " << config_path << "\n";
      return 1;
    }
    echo = nlohmann::json::parse(in);
    cfg = parse_experiment_config(echo, fs::path(config_path).parent_path().string(),
                                  overrides);
  }
  if (!out_dir_given && !cfg.output_dir.empty()) out_dir = cfg.output_dir;

  AggregateResult result = run_experiment(cfg);

  fs::create_directories(out_dir);
  const std::string csv_path = (fs::path(out_dir) / "results.csv").string();
  const std::string json_path = (fs::path(out_dir) / "results.json").string();
  export_csv(result, csv_path);
  export_json(result, echo.dump(), json_path);

  std::cout << summary_table(result) << "\nwrote " << csv_path << "\nwrote " << json_path
            << "\n";
  return 0;
}

int cmd_bounds(int alpha, int tau_max, const std::string& means_text,
               const std::string& rewards_text, const std::string& dist_text, double t_min,
               double t_max, int points, bool show_tightness, const std::string& out_dir,
               const std::string& output) {
  auto means = parse_double_list(means_text);
  auto rewards = parse_double_list(rewards_text);
  if (means.size() != rewards.size())
    throw std::invalid_argument("--means and --max-rewards must have the same length");
  if (means.empty()) throw std::invalid_argument("--means must not be empty");
  if (tau_max % alpha != 0)
    throw std::invalid_argument("--alpha must divide --tau-max");
  for (std::size_t i = 0; i < means.size(); ++i)
    if (means[i] > rewards[i])
      throw std::invalid_argument("mean exceeds max reward for arm " + std::to_string(i));

  InstanceSummary inst{Eigen::Map<const Eigen::ArrayXd>(means.data(), means.size()),
                       Eigen::Map<const Eigen::ArrayXd>(rewards.data(), rewards.size()),
                       make_spread(parse_dist_string(dist_text), alpha), tau_max / alpha};

  auto grid = log_spaced_grid(t_min, t_max, points);
  const std::string csv = bounds_csv(inst, grid);

  if (show_tightness) {
    auto t = tightness_condition(inst.spread);
    std::printf("tightness value = %.12g (%s than the uniform-spread floor)\n", t.value,
                t.tighter ? "tighter" : "not tighter");
  }
  std::string path = output;
  if (path.empty()) {
    fs::create_directories(out_dir);
    path = (fs::path(out_dir) / "bounds.csv").string();
  }
  if (path == "-") {
    std::cout << csv;
  } else {
    write_file(path, csv);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_dist(const std::string& kind, const std::string& named, int alpha, double a, double b,
             double s, double lambda, int n_pop, const std::string& csv_path,
             const std::string& svg_path) {
  DistSpec spec;
  if (!named.empty()) {
    spec.kind = DistSpec::Kind::named;
    spec.name = named;
  } else {
    spec = parse_dist_string(kind);
    if (kind.find(':') == std::string::npos) {  // params from flags
      switch (spec.kind) {
        case DistSpec::Kind::beta_binomial: spec.a = a; spec.b = b; break;
        case DistSpec::Kind::zipfian: spec.s = s; break;
        case DistSpec::Kind::boltzmann: spec.lambda = lambda; break;
        case DistSpec::Kind::hypergeometric: spec.n_pop = n_pop; break;
        default: break;
      }
    }
  }
  SpreadPmf pmf = make_spread(spec, alpha);

  std::printf("# %s, alpha = %d\n", dist_label(spec).c_str(), alpha);
  for (int k = 1; k <= pmf.alpha(); ++k) std::printf("%4d  %.12g\n", k, pmf(k));
  std::printf("expected index E[Y]  = %.12g\n", expected_index(pmf));
  std::printf("index of coincidence = %.12g\n", index_of_coincidence(pmf));

  if (!csv_path.empty()) {
    std::string csv = "k,probability\n";
    char buf[64];
    for (int k = 1; k <= pmf.alpha(); ++k) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g\n", k, pmf(k));
      csv += buf;
    }
    write_file(csv_path, csv);
    std::cout << "wrote " << csv_path << "\n";
  }
  if (!svg_path.empty()) {
    std::vector<double> vals(pmf.probs().begin(), pmf.probs().end());
    write_file(svg_path, render_bar_chart(vals, dist_label(spec), "z-group index k",
                                          "probability"));
    std::cout << "wrote " << svg_path << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& input, const std::string& overlay, bool log_x,
             const std::string& output) {
  AggregateResult result;
  if (input.size() > 5 && input.substr(input.size() - 5) == ".json")
    result = parse_results_json_file(input);
  else
    result = parse_results_csv_file(input);

  std::vector<SvgSeries> series;
  for (const auto& pol : result.policies) {
    SvgSeries s;
    s.label = pol.name;
    s.x.assign(pol.rounds.begin(), pol.rounds.end());
    s.y.assign(pol.mean.begin(), pol.mean.end());
    s.band.assign(pol.ci_half.begin(), pol.ci_half.end());
    series.push_back(std::move(s));
  }

  if (!overlay.empty()) {
    std::ifstream in(overlay);
    if (!in) throw std::runtime_error(overlay + ": cannot open");
    std::string line;
    if (!std::getline(in, line) || line.rfind("T,", 0) != 0)
      throw std::runtime_error(overlay + ": missing bounds header (expected columns "
                               "T,lower_bound,upper_bound,...)");
    SvgSeries lower{"lower bound", {}, {}, {}, true};
    SvgSeries upper{"upper bound", {}, {}, {}, true};
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::size_t pos = 0;
      while (pos <= line.size()) {
        auto comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
      }
      if (fields.size() < 3) continue;
      double t = std::stod(fields[0]);
      if (!fields[1].empty()) {
        lower.x.push_back(t);
        lower.y.push_back(std::stod(fields[1]));
      }
      if (!fields[2].empty()) {
        upper.x.push_back(t);
        upper.y.push_back(std::stod(fields[2]));
      }
    }
    if (!upper.x.empty()) series.push_back(std::move(upper));
    if (!lower.x.empty()) series.push_back(std::move(lower));
  }

  SvgOptions opt;
  opt.log_x = log_x;
  opt.title = "cumulative regret";
  write_file(output, render_line_chart(series, opt));
  std::cout << "wrote " << output << "\n";
  return 0;
}

int cmd_presets(const std::string& dump) {
  if (!dump.empty()) {
    std::cout << preset_config(dump).dump(2) << "\n";
    return 0;
  }
  for (const auto& name : preset_names()) std::cout << name << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporally-partitioned bandit simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir = "out";
  auto* out_opt = app.add_option("--out-dir", out_dir, "output directory")
                      ->envname("TPMAB_OUT_DIR")
                      ->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a config file or preset");
  std::string config_path, preset_name;
  auto* copt = run->add_option("--config", config_path, "experiment config (JSON)");
  auto* popt = run->add_option("--preset", preset_name, "bundled preset name");
  ConfigOverrides overrides;
  std::int64_t horizon_ovr = 0;
  int runs_ovr = 0, workers_ovr = 0;
  std::uint64_t seed_ovr = 0;
  auto* h = run->add_option("--horizon", horizon_ovr, "override horizon T");
  auto* r = run->add_option("--runs", runs_ovr, "override number of runs");
  auto* sd = run->add_option("--seed", seed_ovr, "override base seed");
  auto* w = run->add_option("--workers", workers_ovr, "override worker count");
  copt->excludes(popt);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "evaluate the regret bound curves");
  int b_alpha = 20, b_tau = 100, b_points = 50;
  double b_tmin = 10, b_tmax = 100000;
  std::string b_means, b_rewards, b_dist = "uniform", b_output;
  bool b_tight = false;
  bounds->add_option("--alpha", b_alpha, "number of z-groups")->required();
  bounds->add_option("--tau-max", b_tau, "maximum delay")->required();
  bounds->add_option("--means", b_means, "comma-separated arm means")->required();
  bounds->add_option("--max-rewards", b_rewards, "comma-separated reward bounds")->required();
  bounds->add_option("--dist", b_dist, "spread spec, e.g. uniform | named:begin");
  bounds->add_option("--t-min", b_tmin, "grid start (>= 2)");
  bounds->add_option("--t-max", b_tmax, "grid end");
  bounds->add_option("--points", b_points, "grid size");
  bounds->add_flag("--tightness", b_tight, "print the floor-comparison value");
  bounds->add_option("--output", b_output, "output csv path ('-' for stdout)");

  // dist
  auto* dist = app.add_subcommand("dist", "print a spread pmf and its moments");
  std::string d_kind = "uniform", d_named, d_csv, d_svg;
  int d_alpha = 20, d_npop = 0;
  double d_a = 1, d_b = 1, d_s = 1, d_lambda = 1;
  dist->add_option("--kind", d_kind, "uniform|beta_binomial|zipfian|boltzmann|hypergeometric");
  dist->add_option("--named", d_named, "Table-style preset name, e.g. begin");
  dist->add_option("--alpha", d_alpha, "number of z-groups")->required();
  dist->add_option("--a", d_a, "beta-binomial a");
  dist->add_option("--b", d_b, "beta-binomial b");
  dist->add_option("--s", d_s, "zipfian exponent");
  dist->add_option("--lambda", d_lambda, "boltzmann decay");
  dist->add_option("--n-pop", d_npop, "hypergeometric population size");
  dist->add_option("--csv", d_csv, "also write pmf as csv");
  dist->add_option("--svg", d_svg, "also write pmf bar chart");

  // plot
  auto* plot = app.add_subcommand("plot", "render results as an SVG chart");
  std::string p_input, p_overlay, p_output;
  bool p_logx = false;
  plot->add_option("--input", p_input, "results csv/json from 'run'")->required();
  plot->add_option("--overlay-bounds", p_overlay, "bounds csv from 'bounds'");
  plot->add_flag("--log-x", p_logx, "logarithmic time axis");
  plot->add_option("--output", p_output, "output svg path")->required();

  // presets
  auto* presets = app.add_subcommand("presets", "list bundled experiment configs");
  std::string pr_dump;
  presets->add_option("--dump", pr_dump, "print one preset config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (config_path.empty() && preset_name.empty()) {
        std::cerr << "error: run requires --config or --preset\n";
        return 1;
      }
      if (*h) overrides.horizon = horizon_ovr;
      if (*r) overrides.runs = runs_ovr;
      if (*sd) overrides.seed = seed_ovr;
      if (*w) overrides.workers = workers_ovr;
      return cmd_run(config_path, preset_name, overrides, out_dir, out_opt->count() > 0);
    }
    if (*bounds)
      return cmd_bounds(b_alpha, b_tau, b_means, b_rewards, b_dist, b_tmin, b_tmax,
                        b_points, b_tight, out_dir, b_output);
    if (*dist)
      return cmd_dist(d_kind, d_named, d_alpha, d_a, d_b, d_s, d_lambda, d_npop, d_csv,
                      d_svg);
    if (*plot) return cmd_plot(p_input, p_overlay, p_logx, p_output);
    if (*presets) return cmd_presets(pr_dump);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
