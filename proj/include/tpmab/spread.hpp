#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tpmab {

// Discrete distribution over z-group indices {1..alpha}. probs[k-1] is the
// probability that a unit of reward lands in z-group k. Immutable after
// construction; safe to share across threads.
class SpreadPmf {
 public:
  // Validates: size >= 1, entries >= 0, sum within 1e-12 of 1.
  explicit SpreadPmf(Eigen::ArrayXd probs);

  int alpha() const { return static_cast<int>(probs_.size()); }
  const Eigen::ArrayXd& probs() const { return probs_; }
  double operator()(int k) const { return probs_[k - 1]; }  // k in {1..alpha}

 private:
  Eigen::ArrayXd probs_;
};

// Uniform spread: probs[k] = 1/alpha. The smooth-reward special case.
SpreadPmf uniform_spread(int alpha);

// Shifted Beta-Binomial on {1..alpha}:
//   probs[k-1] = C(alpha-1, k-1) * B(k-1+a, alpha-k+b) / B(a, b)
// Evaluated in log space so alpha up to a few hundred is exact to rounding.
SpreadPmf beta_binomial_spread(int alpha, double a, double b);

// probs[k-1] = k^-s / sum_j j^-s
SpreadPmf zipfian_spread(int alpha, double s);

// probs[k-1] = exp(-lambda*(k-1)) / Z. lambda -> 0 tends to uniform, larger
// lambda concentrates mass at k = 1.
SpreadPmf boltzmann_spread(int alpha, double lambda);

// Hypergeometric(N = n_pop, K = alpha-1, n = alpha-1) shifted onto {1..alpha}.
// Requires n_pop >= 2*alpha; smaller n_pop sharpens the begin-orientation.
SpreadPmf hypergeometric_spread(int alpha, int n_pop);

// E[Y] = sum_k k * probs[k-1]; in [1, alpha].
double expected_index(const SpreadPmf& pmf);

// sum_k probs[k-1]^2, the chance that two independent reward units fall in
// the same z-group; in [1/alpha, 1], minimized by the uniform spread.
double index_of_coincidence(const SpreadPmf& pmf);

// Named Beta-Binomial presets (extreme_begin ... very_end).
struct SpreadPreset {
  std::string name;
  double a;
  double b;
};
const std::vector<SpreadPreset>& spread_presets();
SpreadPmf named_spread(const std::string& name, int alpha);

// Tagged distribution specification as it appears in config files and on the
// command line. The alpha is supplied separately (policies reuse one spec at
// several alpha_est values).
struct DistSpec {
  enum class Kind { uniform, beta_binomial, zipfian, boltzmann, hypergeometric, named };
  Kind kind = Kind::uniform;
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
  double lambda = 0.0;
  int n_pop = 0;
  std::string name;  // for Kind::named
};

SpreadPmf make_spread(const DistSpec& spec, int alpha);
std::string dist_label(const DistSpec& spec);

}  // namespace tpmab
