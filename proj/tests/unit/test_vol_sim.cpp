#include "voldens/errors.hpp"
#include "voldens/rng.hpp"
#include "voldens/vol_sim.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace voldens;

namespace {

double
mean(const std::vector<double>& x)
{
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double
lag_cov(const std::vector<double>& x, std::size_t lag)
{
  const double m = mean(x);
  double s = 0.0;
  for (std::size_t i = 0; i + lag < x.size(); ++i)
    s += (x[i] - m) * (x[i + lag] - m);
  return s / static_cast<double>(x.size() - lag);
}

} // namespace

TEST_CASE("seed mixing")
{
  // SplitMix64 reference output for state 0
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(replication_seed(1, 0, 0) != replication_seed(1, 0, 1));
  CHECK(replication_seed(1, 0, 1) != replication_seed(1, 1, 0));
  CHECK(replication_seed(7, 2, 3) == replication_seed(7, 2, 3));
}

TEST_CASE("OU path has the stationary law and autocorrelation")
{
  const OUParams p{ 2.0, 0.5, 1.0 };
  const double dt = 0.05;
  const auto x = simulate_ou(p, 400000, dt, 11);
  REQUIRE(x.size() == 400001);
  const double var = p.stationary_variance();
  CHECK(std::abs(mean(x) - 0.5) < 0.01);
  CHECK(lag_cov(x, 0) == doctest::Approx(var).epsilon(0.03));
  CHECK(lag_cov(x, 10) / lag_cov(x, 0) == doctest::Approx(std::exp(-2.0 * 10 * dt)).epsilon(0.05));
  CHECK(simulate_ou(p, 10, dt, 3) == simulate_ou(p, 10, dt, 3));
  CHECK_THROWS_AS(OUParams({ -1.0, 0.0, 1.0 }).validate(), ConfigError);
}

TEST_CASE("transition matrix")
{
  const auto q = markov_transition(0.7, 1.9, 0.3);
  CHECK(q[0][0] == doctest::Approx(0.8541862338129448).epsilon(1e-13));
  CHECK(q[0][1] == doctest::Approx(0.3957802225077212).epsilon(1e-13));
  CHECK(q[1][0] == doctest::Approx(0.14581376618705522).epsilon(1e-13));
  CHECK(q[1][1] == doctest::Approx(0.6042197774922788).epsilon(1e-13));
  const auto q0 = markov_transition(0.7, 1.9, 0.0);
  CHECK(q0[0][0] == 1.0);
  CHECK(q0[1][0] == 0.0);
  CHECK_THROWS_AS(markov_transition(0.7, 1.9, -1.0), DomainError);
  const RegimeSwitchParams r{ 0.7, 1.9, {}, {} };
  CHECK(r.stationary()[0] == doctest::Approx(1.9 / 2.6));
}

TEST_CASE("chain occupation and switching frequency")
{
  const double a0 = 0.5, a1 = 1.5, dt = 0.01;
  const auto u = simulate_chain(a0, a1, 400000, dt, 5);
  double ones = 0.0;
  std::size_t stay0 = 0, from0 = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    ones += u[i];
    if (i + 1 < u.size() && u[i] == 0) {
      ++from0;
      stay0 += u[i + 1] == 0;
    }
  }
  CHECK(ones / u.size() == doctest::Approx(a0 / (a0 + a1)).epsilon(0.08));
  const auto q = markov_transition(a0, a1, dt);
  CHECK(static_cast<double>(stay0) / from0 == doctest::Approx(q[0][0]).epsilon(0.002));
}

TEST_CASE("regime path mixes the two components")
{
  RegimeSwitchParams p;
  p.ou0 = { 4.0, -2.0, 1.0 };
  p.ou1 = { 4.0, 2.0, 1.0 };
  const auto path = simulate_regime_path(p, 200000, 0.01, 9);
  for (std::size_t i = 0; i < path.xi.size(); i += 1000) {
    const double level = path.state[i] ? 2.0 : -2.0;
    CHECK(std::abs(path.xi[i] - level) < 3.0);
  }
  CHECK(std::abs(mean(path.xi)) < 0.3);
}

TEST_CASE("price integration")
{
  CHECK(substep_ratio(0.001, 0.05) == 50);
  CHECK_THROWS_AS(substep_ratio(0.001, 0.0055), ConfigError);
  CHECK_THROWS_AS(substep_ratio(0.01, 0.05), ConfigError);
  // constant variance: increments are sqrt(sigma2) * N(0,1) plus drift sqrt(delta)
  std::vector<double> s2(2000 * 20 + 1, 4.0);
  const auto x = integrate_price(s2, 0.0005, 0.01, [](double) { return 1.0; }, 3);
  REQUIRE(x.size() == 2000);
  CHECK(std::abs(mean(x) - 0.1) < 4.0 * 2.0 / std::sqrt(2000.0));
  CHECK(lag_cov(x, 0) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("simulate_path bundles the fine and coarse grids")
{
  const ModelSpec m;
  const auto b = simulate_path(m, 100, 0.01, 20, 42);
  CHECK(b.increments.size() == 100);
  CHECK(b.sigma2.size() == 2001);
  CHECK(b.substeps() == 20);
  CHECK(b.fine_dt == doctest::Approx(0.0005));
  CHECK(b.sigma2_at_block_start(1) == b.sigma2[0]);
  CHECK(b.sigma2_at_block_start(100) == b.sigma2[99 * 20]);
  CHECK_THROWS_AS(b.sigma2_at_block_start(0), IndexError);
  const auto again = simulate_path(m, 100, 0.01, 20, 42);
  CHECK(again.increments == b.increments);
  CHECK(parse_model_kind("regime") == ModelKind::regime);
  CHECK_THROWS_AS(parse_model_kind("heston"), ConfigError);
  CHECK_THROWS_AS(simulate_path(m, 100, 0.01, 5, 42), ConfigError);
}
