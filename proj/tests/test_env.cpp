#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tpmab/env.hpp"
#include "tpmab/presets.hpp"

using namespace tpmab;

namespace {

EnvironmentConfig one_arm_uniform(int alpha, int tau, double rmax, std::uint64_t seed) {
  EnvironmentConfig cfg;
  cfg.num_arms = 1;
  cfg.tau_max = tau;
  cfg.alpha = alpha;
  cfg.arms.push_back({rmax, UniformScaledSampler{}});
  cfg.seed = seed;
  return cfg;
}

std::string write_temp(const std::string& name, const std::string& contents) {
  auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << contents;
  return path;
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks_p_value(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    p += sign * 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("config validation") {
  auto cfg = make_setting1();
  CHECK_NOTHROW(validate(cfg));
  cfg.alpha = 7;  // does not divide 100
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = make_setting1();
  cfg.arms[0].max_reward = 0.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = make_setting1();
  cfg.arms.pop_back();
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

  cfg = make_setting2(1, Scenario::late);
  std::get<BetaScaledSampler>(cfg.arms[3].sampler).a[2] = -1.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("single-group pull is a plain uniform draw") {
  Environment env(one_arm_uniform(1, 1, 100.0, 3));
  double mean = 0.0;
  for (int t = 1; t <= 20000; ++t) {
    const auto& x = env.sample_pull(0, t);
    REQUIRE(x.size() == 1);
    CHECK(x[0] >= 0.0);
    CHECK(x[0] < 100.0);
    mean += x[0];
  }
  mean /= 20000.0;
  // sd of the mean = (100/sqrt(12))/sqrt(n) ~ 0.204
  CHECK(std::abs(mean - 50.0) < 3 * 0.205);
}

TEST_CASE("pull respects per-group caps and total bound") {
  auto cfg = make_setting1();
  cfg.seed = 11;
  Environment env(cfg);
  const int phi = cfg.tau_max / cfg.alpha;
  for (int t = 1; t <= 200; ++t) {
    int arm = (t - 1) % cfg.num_arms;
    const auto& x = env.sample_pull(arm, t);
    const double cap = cfg.arms[arm].max_reward / cfg.alpha;
    double total = 0.0;
    for (int k = 0; k < cfg.alpha; ++k) {
      double z = x.segment(k * phi, phi).sum();
      CHECK(z >= 0.0);
      CHECK(z <= cap + 1e-9);
      total += z;
    }
    CHECK(total <= cfg.arms[arm].max_reward + 1e-9);
  }
}

TEST_CASE("beta(1,1) group draws match uniform draws in distribution") {
  auto uni_cfg = one_arm_uniform(4, 4, 80.0, 5);
  EnvironmentConfig beta_cfg = uni_cfg;
  beta_cfg.arms[0].sampler =
      BetaScaledSampler{Eigen::ArrayXd::Ones(4), Eigen::ArrayXd::Ones(4)};

  Environment uni(uni_cfg), beta(beta_cfg);
  std::vector<double> us, bs;
  for (int t = 1; t <= 10000; ++t) {
    us.push_back(uni.sample_pull(0, t)[0]);   // first group aggregate / phi, phi=1
    bs.push_back(beta.sample_pull(0, t)[0]);
  }
  CHECK(ks_p_value(us, bs) > 0.01);
}

TEST_CASE("observe window arithmetic") {
  auto cfg = one_arm_uniform(1, 3, 10.0, 9);
  Environment env(cfg);
  CHECK(env.observe(0).items.empty());

  env.sample_pull(0, 1);
  auto b1 = env.observe(1);
  REQUIRE(b1.items.size() == 1);
  CHECK(b1.items[0].pull_round == 1);

  env.sample_pull(0, 2);
  env.sample_pull(0, 3);
  auto b3 = env.observe(3);
  CHECK(b3.items.size() == 3);

  env.sample_pull(0, 4);
  auto b4 = env.observe(4);
  CHECK(b4.items.size() == 3);  // pull 1 aged out
  for (const auto& obs : b4.items) CHECK(obs.pull_round >= 2);
}

TEST_CASE("revealed partials conserve the sampled cumulative reward") {
  auto cfg = make_setting1(4, 8, 3);
  cfg.seed = 123;
  Environment env(cfg);
  const int T = 60;
  std::vector<double> sampled_sum(T + 1, 0.0), observed_sum(T + 1, 0.0);
  for (int t = 1; t <= T; ++t) {
    const auto& x = env.sample_pull((t * 7) % 3, t);
    double s = 0.0;
    for (int j = 0; j < x.size(); ++j) s += x[j];
    sampled_sum[t] = s;
    for (const auto& obs : env.observe(t).items) observed_sum[obs.pull_round] += obs.value;
  }
  for (int h = 1; h + cfg.tau_max - 1 <= T; ++h)
    CHECK(observed_sum[h] == sampled_sum[h]);  // bit-level
}

TEST_CASE("true means") {
  auto cfg = one_arm_uniform(20, 100, 100.0, 0);
  CHECK(true_mean(cfg, 0) == doctest::Approx(50.0).epsilon(1e-14));

  EnvironmentConfig beta2;
  beta2.num_arms = 1;
  beta2.tau_max = 2;
  beta2.alpha = 2;
  beta2.arms.push_back(
      {100.0, BetaScaledSampler{Eigen::ArrayXd::Ones(2), Eigen::ArrayXd::Ones(2)}});
  CHECK(true_mean(beta2, 0) == doctest::Approx(50.0).epsilon(1e-14));

  // configuration-1 "late" parameter vectors, summed by hand:
  // 2/12+4/14+6/16+8/18+10/20+10/20+10/18+10/16+10/14+10/12 = 5
  auto late = make_setting2(1, Scenario::late);
  int i = 0;
  for (const auto& arm : late.arms) {
    CHECK(true_mean(late, i) == doctest::Approx(arm.max_reward / 100.0 * 50.0).epsilon(1e-12));
    ++i;
  }
  CHECK_THROWS_AS(true_mean(late, 10), std::invalid_argument);
}

TEST_CASE("empirical pull mean agrees with true_mean") {
  auto cfg = one_arm_uniform(20, 20, 100.0, 77);
  Environment env(cfg);
  const int n = 100000;
  double mean = 0.0;
  for (int t = 1; t <= n; ++t) mean += env.sample_pull(0, t).sum();
  mean /= n;
  // Var(r) = rmax^2 / (12 alpha) => sd of mean ~ 0.0204
  CHECK(std::abs(mean - 50.0) < 3 * 0.0205);
}

TEST_CASE("setting 1 layout") {
  auto cfg = make_setting1();
  CHECK(cfg.num_arms == 10);
  CHECK(cfg.tau_max == 100);
  CHECK(cfg.alpha == 20);
  CHECK(cfg.arms[0].max_reward == 100.0);
  CHECK(cfg.arms[9].max_reward == 2300.0);
  int best = 0;
  for (int i = 1; i < 10; ++i)
    if (true_mean(cfg, i) > true_mean(cfg, best)) best = i;
  CHECK(best == 9);
}

TEST_CASE("setting 2 parameter tables") {
  auto late = make_setting2(1, Scenario::late);
  const auto& bs = std::get<BetaScaledSampler>(late.arms[0].sampler);
  const double expect_a[] = {2, 4, 6, 8, 10, 10, 10, 10, 10, 10};
  for (int k = 0; k < 10; ++k) {
    CHECK(bs.a[k] == expect_a[k]);
    CHECK(bs.b[k] == expect_a[9 - k]);
  }

  auto early = make_setting2(1, Scenario::early);
  const auto& es = std::get<BetaScaledSampler>(early.arms[0].sampler);
  for (int k = 0; k < 10; ++k) {
    CHECK(es.a[k] == expect_a[9 - k]);
    CHECK(es.b[k] == expect_a[k]);
  }

  auto c3 = make_setting2(3, Scenario::uniform);
  CHECK(c3.tau_max == 200);
  CHECK(c3.alpha == 20);
  const auto& us = std::get<BetaScaledSampler>(c3.arms[0].sampler);
  CHECK((us.a == 1.0).all());
  CHECK((us.b == 1.0).all());

  auto c4 = make_setting2(4, Scenario::late);
  CHECK(c4.alpha == 100);
  const auto& r4 = std::get<BetaScaledSampler>(c4.arms[0].sampler);
  CHECK(r4.a[0] == 2.0);
  CHECK(r4.a[48] == 98.0);
  CHECK(r4.a[49] == 100.0);
  CHECK(r4.a[99] == 100.0);

  CHECK_THROWS_AS(make_setting2(5, Scenario::late), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario("sideways"), std::invalid_argument);
}

TEST_CASE("determinism of reward streams") {
  auto cfg = make_setting2(1, Scenario::late);
  cfg.seed = 99;
  Environment a(cfg), b(cfg);
  for (int t = 1; t <= 50; ++t) {
    int arm = (3 * t) % cfg.num_arms;
    const auto& xa = a.sample_pull(arm, t);
    const auto& xb = b.sample_pull(arm, t);
    for (int j = 0; j < xa.size(); ++j) CHECK(xa[j] == xb[j]);
  }
}

TEST_CASE("trace environment") {
  const std::string good =
      "tpmab-trace v1 K=2 tau_max=3\n"
      "0,1.0,2.0,3.0\n"
      "1,0.5,0.5,0.5\n";
  auto path = write_temp("tpmab_good.trace", good);
  auto cfg = make_trace_env(path, 2, 3);
  CHECK(cfg.num_arms == 2);
  CHECK(cfg.tau_max == 3);
  CHECK(true_mean(cfg, 0) == 6.0);
  CHECK(true_mean(cfg, 1) == 1.5);
  CHECK(cfg.arms[0].max_reward == 6.0);

  // constant single-record arms replay deterministically
  cfg.seed = 4;
  Environment env(cfg);
  const auto& x = env.sample_pull(0, 1);
  CHECK(x[0] == 1.0);
  CHECK(x[2] == 3.0);

  CHECK_THROWS_AS(make_trace_env(path, 3, 3), std::runtime_error);   // K mismatch
  CHECK_THROWS_AS(make_trace_env(path, 2, 10), std::runtime_error);  // tau mismatch

  auto long_row = write_temp("tpmab_long.trace",
                             "tpmab-trace v1 K=1 tau_max=3\n0,1.0,2.0,3.0,4.0\n");
  CHECK_THROWS_AS(make_trace_env(long_row, 1, 3), std::runtime_error);

  auto empty = write_temp("tpmab_empty.trace", "");
  CHECK_THROWS_AS(make_trace_env(empty, 1, 3), std::runtime_error);

  auto no_records = write_temp("tpmab_norec.trace", "tpmab-trace v1 K=1 tau_max=3\n");
  CHECK_THROWS_AS(make_trace_env(no_records, 1, 3), std::runtime_error);

  auto missing_arm = write_temp("tpmab_hole.trace",
                                "tpmab-trace v1 K=2 tau_max=2\n0,1.0,2.0\n");
  CHECK_THROWS_AS(make_trace_env(missing_arm, 2, 2), std::runtime_error);

  CHECK_THROWS_AS(make_trace_env("/nonexistent/file.trace", 2, 3), std::runtime_error);

  // bundled demo trace parses via the header-driven overload
  auto demo = write_temp("tpmab_demo.trace", demo_trace_text());
  auto demo_cfg = make_trace_env(demo);
  CHECK(demo_cfg.num_arms == 2);
  CHECK(demo_cfg.tau_max == 4);
  CHECK(true_mean(demo_cfg, 1) > true_mean(demo_cfg, 0));
}

TEST_CASE("sampling errors") {
  Environment env(one_arm_uniform(2, 4, 10.0, 1));
  CHECK_THROWS_AS(env.sample_pull(1, 1), std::invalid_argument);
  env.sample_pull(0, 1);
  CHECK_THROWS_AS(env.sample_pull(0, 3), std::logic_error);  // skipped round
}
