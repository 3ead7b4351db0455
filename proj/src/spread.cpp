#include "tpmab/spread.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tpmab {

namespace {

double log_beta(double u, double v) {
  return std::lgamma(u) + std::lgamma(v) - std::lgamma(u + v);
}

double log_choose(double n, double x) {
  return std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
}

void require_alpha(int alpha) {
  if (alpha < 1) throw std::invalid_argument("spread: alpha must be >= 1");
}

}  // namespace

SpreadPmf::SpreadPmf(Eigen::ArrayXd probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw std::invalid_argument("SpreadPmf: empty pmf");
  if ((probs_ < 0.0).any()) throw std::invalid_argument("SpreadPmf: negative entry");
  if (std::abs(probs_.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("SpreadPmf: entries do not sum to 1");
}

SpreadPmf uniform_spread(int alpha) {
  require_alpha(alpha);
  return SpreadPmf(Eigen::ArrayXd::Constant(alpha, 1.0 / alpha));
}

SpreadPmf beta_binomial_spread(int alpha, double a, double b) {
  require_alpha(alpha);
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("beta_binomial_spread: a and b must be positive");
  const int n = alpha - 1;
  const double lbab = log_beta(a, b);
  Eigen::ArrayXd p(alpha);
  for (int x = 0; x <= n; ++x)
    p[x] = std::exp(log_choose(n, x) + log_beta(x + a, n - x + b) - lbab);
  return SpreadPmf(std::move(p));
}

SpreadPmf zipfian_spread(int alpha, double s) {
  require_alpha(alpha);
  if (!(s > 0.0)) throw std::invalid_argument("zipfian_spread: s must be positive");
  Eigen::ArrayXd w(alpha);
  for (int k = 1; k <= alpha; ++k) w[k - 1] = std::pow(static_cast<double>(k), -s);
  return SpreadPmf(w / w.sum());
}

SpreadPmf boltzmann_spread(int alpha, double lambda) {
  require_alpha(alpha);
  if (!(lambda > 0.0))
    throw std::invalid_argument("boltzmann_spread: lambda must be positive");
  Eigen::ArrayXd w(alpha);
  for (int k = 0; k < alpha; ++k) w[k] = std::exp(-lambda * k);
  return SpreadPmf(w / w.sum());
}

SpreadPmf hypergeometric_spread(int alpha, int n_pop) {
  require_alpha(alpha);
  if (n_pop < 2 * alpha)
    throw std::invalid_argument("hypergeometric_spread: n_pop must be >= 2*alpha");
  const double N = n_pop;
  const double K = alpha - 1;  // successes in population = draws
  const double lden = log_choose(N, K);
  Eigen::ArrayXd p(alpha);
  for (int x = 0; x <= alpha - 1; ++x)
    p[x] = std::exp(log_choose(K, x) + log_choose(N - K, K - x) - lden);
  return SpreadPmf(std::move(p));
}

double expected_index(const SpreadPmf& pmf) {
  const auto& p = pmf.probs();
  return (Eigen::ArrayXd::LinSpaced(pmf.alpha(), 1.0, pmf.alpha()) * p).sum();
}

double index_of_coincidence(const SpreadPmf& pmf) { return pmf.probs().square().sum(); }

const std::vector<SpreadPreset>& spread_presets() {
  static const std::vector<SpreadPreset> presets = {
      {"extreme_begin", 1.0, 100.0}, {"very_begin", 1.0, 16.0},
      {"begin", 2.0, 8.0},           {"begin_middle", 2.0, 4.0},
      {"middle", 5.0, 5.0},          {"middle_end", 4.0, 2.0},
      {"end", 8.0, 2.0},             {"very_end", 16.0, 1.0},
  };
  return presets;
}

SpreadPmf named_spread(const std::string& name, int alpha) {
  for (const auto& p : spread_presets())
    if (p.name == name) return beta_binomial_spread(alpha, p.a, p.b);
  std::string known;
  for (const auto& p : spread_presets()) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  throw std::invalid_argument("unknown spread preset '" + name + "' (known: " + known + ")");
}

SpreadPmf make_spread(const DistSpec& spec, int alpha) {
  switch (spec.kind) {
    case DistSpec::Kind::uniform: return uniform_spread(alpha);
    case DistSpec::Kind::beta_binomial: return beta_binomial_spread(alpha, spec.a, spec.b);
    case DistSpec::Kind::zipfian: return zipfian_spread(alpha, spec.s);
    case DistSpec::Kind::boltzmann: return boltzmann_spread(alpha, spec.lambda);
    case DistSpec::Kind::hypergeometric: return hypergeometric_spread(alpha, spec.n_pop);
    case DistSpec::Kind::named: return named_spread(spec.name, alpha);
  }
  throw std::invalid_argument("make_spread: bad kind");
}

std::string dist_label(const DistSpec& spec) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  switch (spec.kind) {
    case DistSpec::Kind::uniform: return "uniform";
    case DistSpec::Kind::beta_binomial:
      return "beta_binomial(" + num(spec.a) + "," + num(spec.b) + ")";
    case DistSpec::Kind::zipfian: return "zipfian(" + num(spec.s) + ")";
    case DistSpec::Kind::boltzmann: return "boltzmann(" + num(spec.lambda) + ")";
    case DistSpec::Kind::hypergeometric:
      return "hypergeom(" + std::to_string(spec.n_pop) + ")";
    case DistSpec::Kind::named: return spec.name;
  }
  return "?";
}

}  // namespace tpmab
