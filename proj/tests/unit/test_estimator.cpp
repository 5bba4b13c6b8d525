#include "voldens/density_grid.hpp"
#include "voldens/errors.hpp"
#include "voldens/estimator.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

using namespace voldens;

TEST_CASE("lattice offsets survive binary rounding")
{
  CHECK(lattice_offset(1.5, 0.1) == 15);
  CHECK(lattice_offset(1.0, 0.01) == 100);
  CHECK(lattice_offset(1.05, 0.01) == 105);
  CHECK(lattice_offset(0.999, 0.01) == 99);
  CHECK(lattice_offset(0.005, 0.01) == 0);
}

TEST_CASE("observation vectors are 1-based with offsets i_k - i_1")
{
  std::vector<double> y{ 10, 11, 12, 13, 14, 15, 16, 17, 18, 19 };
  const auto obs = make_observation_set(y, 0.1, { 0.2, 0.5 });
  CHECK(obs.index_offsets == std::vector<std::size_t>{ 2, 5 });
  CHECK(obs.effective_count() == 7);
  CHECK(make_observation_vector(obs, 1) == std::vector<double>{ 10, 13 });
  CHECK(make_observation_vector(obs, 7) == std::vector<double>{ 16, 19 });
  CHECK_THROWS_AS(make_observation_vector(obs, 0), IndexError);
  CHECK_THROWS_AS(make_observation_vector(obs, 8), IndexError);
  CHECK_THROWS_AS(make_observation_set(y, 0.1, { 0.5, 0.2 }), InputError);
  CHECK_THROWS_AS(make_observation_set(y, 0.1, { 0.0 }), InputError);
  CHECK_THROWS_AS(make_observation_set(y, -1.0, { 0.2 }), InputError);
}

TEST_CASE("too short a series is rejected")
{
  const auto obs = make_observation_set({ 1, 2, 3 }, 0.1, { 0.1, 0.9 });
  CHECK(obs.effective_count() == 0);
  const auto table = DeconvTable::build(builtin_kernel("poly3"), 2.0, -10, 10, 512);
  CHECK_THROWS_WITH_AS(estimate_density(obs, table, { { 0.0 }, { 0.0 } }),
                       "series too short for requested time spread", InputError);
}

TEST_CASE("increments and log squares")
{
  const std::vector<double> s{ 0.0, 0.2, 0.1, 0.1 };
  const auto x = normalized_increments(s, 0.04);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(-0.5));
  CHECK(x[2] == 0.0);
  const auto ls = log_square_transform(x);
  CHECK(ls.clamped == 1);
  CHECK(ls.values[0] == doctest::Approx(0.0));
  CHECK(ls.values[1] == doctest::Approx(std::log(0.25)));
  CHECK(ls.values[2] == doctest::Approx(2.0 * std::log(1e-12)));
}

TEST_CASE("bandwidth schedule")
{
  const auto b = default_bandwidth(100000, 1, {});
  CHECK(b.h == doctest::Approx(9.0 * M_PI / std::log(1e5)));
  CHECK(b.delta == doctest::Approx(std::pow(1e5, -0.5)));
  CHECK(b.gamma_threshold == 8.0);
  CHECK(b.condition_met);
  CHECK(!b.warning);
  const auto b2 = default_bandwidth(100000, 2, { 7.0, 0.5, std::nullopt });
  CHECK(!b2.condition_met);
  CHECK(b2.warning);
  const auto b3 = default_bandwidth(1000, 1, { 9.0, 0.5, 1.25 });
  CHECK(b3.h == 1.25);
  CHECK_THROWS_AS(default_bandwidth(1, 1, {}), InputError);
}

TEST_CASE("estimator matches a direct double sum")
{
  const std::vector<double> y{ -1.0, 0.3, 2.2, -0.4, 1.1, 0.0, -2.5, 0.8 };
  const double delta = 0.25, h = 1.5;
  const auto obs = make_observation_set(y, delta, { 0.25, 0.75 });
  const auto table = DeconvTable::build(builtin_kernel("poly3"), h, -20, 20, 8192);
  const DeconvKernel& v = table.deconv_kernel();
  const std::vector<double> ax{ -1.0, 0.5, 2.0 };
  const auto grid = estimate_density(obs, table, { ax, ax });
  const std::size_t m = obs.effective_count();
  REQUIRE(m == 6);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      double s = 0.0;
      for (std::size_t j = 1; j <= m; ++j) {
        const auto yj = make_observation_vector(obs, j);
        s += v((ax[a] - yj[0]) / h) * v((ax[b] - yj[1]) / h);
      }
      s /= m * h * h;
      const std::array<std::size_t, 2> idx{ a, b };
      CHECK(grid.at(idx) == doctest::Approx(s).epsilon(1e-5));
    }
  // thread count does not change a single bit
  const auto g1 = estimate_density(obs, table, { ax, ax }, 1);
  const auto g3 = estimate_density(obs, table, { ax, ax }, 3);
  CHECK(std::equal(g1.values().begin(), g1.values().end(), g3.values().begin()));
  CHECK_THROWS_AS(estimate_density(obs, table, { ax }), InputError);
}

TEST_CASE("density grid")
{
  DensityGrid g({ { 0.0, 1.0, 2.0 }, { 0.0, 0.5 } });
  CHECK(g.size() == 6);
  CHECK(g.shape() == std::vector<std::size_t>{ 3, 2 });
  const std::array<std::size_t, 2> i{ 2, 1 };
  CHECK(g.flat_index(i) == 5);
  CHECK(g.point(3) == std::vector<double>{ 1.0, 0.5 });
  for (auto& v : g.values())
    v = 1.0;
  CHECK(g.integral() == doctest::Approx(1.0));
  std::ostringstream out;
  write_density_csv(g, out);
  CHECK(out.str().rfind("x1,x2,fhat\n0,0,1\n0,0.5,1\n", 0) == 0);
  const auto a = AxisSpec::parse("-2.5:4:14");
  CHECK(a.lo == -2.5);
  CHECK(a.n == 14);
  CHECK(a.points().back() == 4.0);
  CHECK_THROWS_AS(AxisSpec::parse("1:2"), InputError);
  CHECK_THROWS_AS(AxisSpec::parse("1:x:3"), InputError);
  CHECK_THROWS_AS(AxisSpec::parse("2:1:3"), InputError);
  CHECK_THROWS_AS(AxisSpec::parse("0:1:2.5"), InputError);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
