#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tpmab/rng.hpp"
#include "tpmab/spread.hpp"

using namespace tpmab;

namespace {

// Independent oracle for the shifted Beta-Binomial pmf: long-double forward
// recurrence instead of log-gamma evaluation.
//   p(0) = prod_{j=0}^{n-1} (b+j)/(a+b+j)
//   p(x+1)/p(x) = (n-x)/(x+1) * (x+a)/(n-x-1+b)
std::vector<double> beta_binomial_oracle(int alpha, double a, double b) {
  const int n = alpha - 1;
  long double p0 = 1.0L;
  for (int j = 0; j < n; ++j) p0 *= (b + j) / (a + b + j);
  std::vector<double> pmf(alpha);
  long double p = p0;
  pmf[0] = static_cast<double>(p);
  for (int x = 0; x < n; ++x) {
    p *= (static_cast<long double>(n - x) / (x + 1)) * ((x + a) / (n - x - 1 + b));
    pmf[x + 1] = static_cast<double>(p);
  }
  return pmf;
}

double oracle_ic(const std::vector<double>& p) {
  long double s = 0.0L;
  for (double v : p) s += static_cast<long double>(v) * v;
  return static_cast<double>(s);
}

double oracle_ey(const std::vector<double>& p) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < p.size(); ++k) s += (k + 1.0L) * p[k];
  return static_cast<double>(s);
}

SpreadPmf random_pmf(int alpha, RngStream& rng) {
  Eigen::ArrayXd w(alpha);
  for (int k = 0; k < alpha; ++k) w[k] = rng.uniform() + 1e-6;
  return SpreadPmf(w / w.sum());
}

}  // namespace

TEST_CASE("uniform spread") {
  auto p4 = uniform_spread(4);
  for (int k = 1; k <= 4; ++k) CHECK(p4(k) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(uniform_spread(1).probs()[0] == 1.0);
  auto p20 = uniform_spread(20);
  CHECK(p20.alpha() == 20);
  for (int k = 1; k <= 20; ++k) CHECK(p20(k) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK_THROWS_AS(uniform_spread(0), std::invalid_argument);
}

TEST_CASE("beta binomial matches the recurrence oracle") {
  for (auto [alpha, a, b] : {std::tuple{20, 2.0, 8.0}, std::tuple{50, 1.0, 100.0},
                             std::tuple{50, 16.0, 1.0}, std::tuple{100, 2.0, 8.0},
                             std::tuple{10, 0.5, 0.7}}) {
    auto pmf = beta_binomial_spread(alpha, a, b);
    auto oracle = beta_binomial_oracle(alpha, a, b);
    for (int k = 0; k < alpha; ++k)
      CHECK(pmf.probs()[k] == doctest::Approx(oracle[k]).epsilon(1e-10));
  }
}

TEST_CASE("beta binomial golden values, alpha=20 a=2 b=8") {
  // frozen from exact rational arithmetic
  auto pmf = beta_binomial_spread(20, 2.0, 8.0);
  CHECK(pmf.probs()[0] == doctest::Approx(0.095238095238095233).epsilon(1e-12));
  CHECK(pmf.probs()[1] == doctest::Approx(0.1391941391941392).epsilon(1e-12));
  CHECK(pmf.probs()[2] == doctest::Approx(0.15032967032967032).epsilon(1e-12));
  CHECK(pmf.probs()[3] == doctest::Approx(0.14197802197802198).epsilon(1e-12));
  CHECK(pmf.probs()[4] == doctest::Approx(0.12345914954610607).epsilon(1e-12));
  CHECK(pmf.probs()[9] == doctest::Approx(0.028157349896480333).epsilon(1e-12));
  CHECK(pmf.probs()[19] == doctest::Approx(2.8956550695681131e-06).epsilon(1e-12));
  CHECK(expected_index(pmf) == doctest::Approx(4.8).epsilon(1e-12));
  CHECK(index_of_coincidence(pmf) == doctest::Approx(0.10925313948238849).epsilon(1e-12));
}

TEST_CASE("beta binomial special cases") {
  // BetaBinom(n, 1, 1) is uniform on its support
  auto bb = beta_binomial_spread(20, 1.0, 1.0);
  auto uni = uniform_spread(20);
  for (int k = 0; k < 20; ++k)
    CHECK(std::abs(bb.probs()[k] - uni.probs()[k]) < 1e-12);

  // alpha=2, a=1, b=100: probs[0] = 100/101
  auto heavy = beta_binomial_spread(2, 1.0, 100.0);
  CHECK(heavy.probs()[0] == doctest::Approx(100.0 / 101.0).epsilon(1e-13));

  CHECK_THROWS_AS(beta_binomial_spread(10, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(beta_binomial_spread(10, 1.0, -2.0), std::invalid_argument);
}

TEST_CASE("zipfian spread") {
  auto p = zipfian_spread(3, 1.0);
  CHECK(p.probs()[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-14));
  CHECK(p.probs()[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
  CHECK(p.probs()[2] == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  CHECK(zipfian_spread(1, 3.5).probs()[0] == 1.0);

  auto p20 = zipfian_spread(20, 1.0);
  for (int k = 1; k < 20; ++k) CHECK(p20.probs()[k] < p20.probs()[k - 1]);
  CHECK_THROWS_AS(zipfian_spread(5, 0.0), std::invalid_argument);
}

TEST_CASE("boltzmann spread") {
  auto p = boltzmann_spread(2, std::log(2.0));
  CHECK(p.probs()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(p.probs()[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(boltzmann_spread(1, 1.0).probs()[0] == 1.0);
  CHECK(boltzmann_spread(5, 50.0).probs()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(boltzmann_spread(5, -1.0), std::invalid_argument);
}

TEST_CASE("hypergeometric spread") {
  auto p = hypergeometric_spread(2, 4);
  CHECK(p.probs()[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(p.probs()[1] == doctest::Approx(0.25).epsilon(1e-14));

  CHECK(hypergeometric_spread(1, 2).probs()[0] == doctest::Approx(1.0).epsilon(1e-14));

  // frozen from exact binomial-coefficient arithmetic
  auto p200 = hypergeometric_spread(20, 200);
  CHECK(p200.probs()[0] == doctest::Approx(0.13633715527054455).epsilon(1e-11));
  CHECK(p200.probs()[1] == doctest::Approx(0.30194915983231035).epsilon(1e-11));
  CHECK(p200.probs()[2] == doctest::Approx(0.29826685300508704).epsilon(1e-11));
  CHECK(p200.probs()[5] == doctest::Approx(0.018091124584944315).epsilon(1e-11));
  CHECK(p200.probs()[19] == doctest::Approx(5.6086195417978219e-27).epsilon(1e-9));
  CHECK(expected_index(p200) == doctest::Approx(2.805).epsilon(1e-12));
  CHECK(index_of_coincidence(p200) == doctest::Approx(0.23389629680522372).epsilon(1e-11));

  CHECK_THROWS_AS(hypergeometric_spread(20, 39), std::invalid_argument);
}

TEST_CASE("moments") {
  for (int alpha : {1, 2, 7, 20, 100}) {
    CHECK(expected_index(uniform_spread(alpha)) ==
          doctest::Approx((alpha + 1.0) / 2.0).epsilon(1e-12));
    CHECK(index_of_coincidence(uniform_spread(alpha)) ==
          doctest::Approx(1.0 / alpha).epsilon(1e-12));
  }
  Eigen::ArrayXd point = Eigen::ArrayXd::Zero(10);
  point[0] = 1.0;
  SpreadPmf pm(point);
  CHECK(expected_index(pm) == 1.0);
  CHECK(index_of_coincidence(pm) == 1.0);

  CHECK(expected_index(beta_binomial_spread(20, 2, 8)) == doctest::Approx(4.8).epsilon(1e-12));
}

TEST_CASE("reference coincidence values at alpha_est=50") {
  CHECK(index_of_coincidence(beta_binomial_spread(50, 1, 100)) ==
        doctest::Approx(0.51).epsilon(0.04));
  CHECK(index_of_coincidence(beta_binomial_spread(50, 16, 1)) ==
        doctest::Approx(0.14).epsilon(0.15));
  // and against the recurrence oracle, tightly
  CHECK(index_of_coincidence(beta_binomial_spread(50, 1, 100)) ==
        doctest::Approx(oracle_ic(beta_binomial_oracle(50, 1, 100))).epsilon(1e-11));
  CHECK(expected_index(beta_binomial_spread(50, 16, 1)) ==
        doctest::Approx(oracle_ey(beta_binomial_oracle(50, 16, 1))).epsilon(1e-11));
}

TEST_CASE("constructor invariants hold for every family") {
  auto check_pmf = [](const SpreadPmf& p) {
    CHECK(std::abs(p.probs().sum() - 1.0) <= 1e-12);
    CHECK((p.probs() >= 0.0).all());
    double ey = expected_index(p);
    CHECK(ey >= 1.0 - 1e-12);
    CHECK(ey <= p.alpha() + 1e-12);
    double ic = index_of_coincidence(p);
    CHECK(ic >= 1.0 / p.alpha() - 1e-12);
    CHECK(ic <= 1.0 + 1e-12);
  };
  for (int alpha : {1, 2, 5, 20, 100}) {
    check_pmf(uniform_spread(alpha));
    check_pmf(beta_binomial_spread(alpha, 2, 8));
    check_pmf(beta_binomial_spread(alpha, 16, 1));
    check_pmf(zipfian_spread(alpha, 1.5));
    check_pmf(boltzmann_spread(alpha, 0.25));
    check_pmf(hypergeometric_spread(alpha, 3 * alpha));
  }
}

TEST_CASE("coincidence is minimized by the uniform pmf") {
  auto rng = substream(7, 0);
  for (int alpha : {2, 5, 20}) {
    for (int rep = 0; rep < 100; ++rep) {
      auto p = random_pmf(alpha, rng);
      CHECK(index_of_coincidence(p) >= 1.0 / alpha - 1e-12);
    }
  }
}

TEST_CASE("zipfian and boltzmann pmfs are non-increasing") {
  auto rng = substream(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    int alpha = 2 + static_cast<int>(rng.uniform() * 40);
    double s = 0.1 + rng.uniform() * 4.0;
    auto z = zipfian_spread(alpha, s);
    auto bz = boltzmann_spread(alpha, s);
    for (int k = 1; k < alpha; ++k) {
      CHECK(z.probs()[k] <= z.probs()[k - 1] + 1e-15);
      CHECK(bz.probs()[k] <= bz.probs()[k - 1] + 1e-15);
    }
  }
}

TEST_CASE("named presets") {
  auto begin = named_spread("begin", 20);
  auto direct = beta_binomial_spread(20, 2, 8);
  for (int k = 0; k < 20; ++k) CHECK(begin.probs()[k] == direct.probs()[k]);
  CHECK(spread_presets().size() == 8);
  CHECK_THROWS_AS(named_spread("nope", 20), std::invalid_argument);
}

TEST_CASE("dist spec dispatch") {
  DistSpec named{DistSpec::Kind::named, 0, 0, 0, 0, 0, "very_begin"};
  auto p = make_spread(named, 20);
  auto direct = beta_binomial_spread(20, 1, 16);
  for (int k = 0; k < 20; ++k) CHECK(p.probs()[k] == direct.probs()[k]);
  CHECK(dist_label(named) == "very_begin");

  DistSpec zipf;
  zipf.kind = DistSpec::Kind::zipfian;
  zipf.s = 2.0;
  CHECK(dist_label(zipf) == "zipfian(2)");
  CHECK(make_spread(zipf, 5).alpha() == 5);
}

TEST_CASE("invalid pmf rejected") {
  Eigen::ArrayXd bad(3);
  bad << 0.5, 0.4, 0.2;
  CHECK_THROWS_AS(SpreadPmf{bad}, std::invalid_argument);
  bad << 0.5, 0.6, -0.1;
  CHECK_THROWS_AS(SpreadPmf{bad}, std::invalid_argument);
}
