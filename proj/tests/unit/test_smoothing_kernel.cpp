#include "voldens/errors.hpp"
#include "voldens/smoothing_kernel.hpp"

#include <doctest.h>

#include <cmath>

using namespace voldens;

// reference values from arbitrary-precision quadrature of
// (1/pi) int_0^1 phi_w(s) cos(sx) ds
TEST_CASE("eval_w matches high-precision quadrature")
{
  const auto k3 = builtin_kernel("poly3");
  const auto k4 = builtin_kernel("poly4");
  CHECK(eval_w(k3, 0.0) == doctest::Approx(0.14551309082687574).epsilon(1e-13));
  CHECK(eval_w(k3, 1.3) == doctest::Approx(0.13236456482155103).epsilon(1e-13));
  CHECK(eval_w(k3, 7.5) == doctest::Approx(-0.0022350448353225143).epsilon(1e-11));
  CHECK(eval_w(k3, -40.0) == doctest::Approx(-4.609193930366402e-6).epsilon(1e-8));
  CHECK(eval_w(k4, 0.0) == doctest::Approx(0.12934496962388954).epsilon(1e-13));
  CHECK(eval_w(k4, 7.5) == doctest::Approx(0.0030628455408980243).epsilon(1e-11));
  CHECK(eval_w(k4, 40.0) == doctest::Approx(6.6671648215866662e-7).epsilon(1e-7));
}

TEST_CASE("w far out follows the edge asymptotics")
{
  // w(u) ~ (A Gamma(rho + 1) / pi) u^{-(rho+1)} cos(u - (rho + 1) pi / 2);
  // the next edge term 12 t^4 contributes 12 * 4! / pi u^{-5}
  const auto k = builtin_kernel("poly3");
  for (double u : { 1500.3, 3100.7 }) {
    const double lead = 8.0 * 6.0 / M_PI * std::pow(u, -4.0) * std::cos(u - 2.0 * M_PI);
    CHECK(std::abs(eval_w(k, u) - lead) < 100.0 * std::pow(u, -5.0));
  }
}

TEST_CASE("phi_w support and shape")
{
  const auto k = builtin_kernel("poly3");
  CHECK(k.phi_w(0.0) == 1.0);
  CHECK(k.phi_w(1.0) == 0.0);
  CHECK(k.phi_w(-1.5) == 0.0);
  CHECK(k.phi_w(0.5) == doctest::Approx(std::pow(0.75, 3)));
  CHECK(k.phi_w(0.3) == k.phi_w(-0.3));
  CHECK(k.rho() == 3.0);
  CHECK(k.edge_coeff() == 8.0);
}

TEST_CASE("kernel moments")
{
  const auto m3 = kernel_moments(builtin_kernel("poly3"));
  CHECK(m3.m0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m3.mu2 == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(m3.m2_abs >= m3.mu2);
  CHECK(std::isfinite(m3.m2_abs));
  const auto m4 = kernel_moments(builtin_kernel("poly4"));
  CHECK(m4.m0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m4.mu2 == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("kernel validation")
{
  CHECK_THROWS_AS(builtin_kernel("sinc"), NotFoundError);
  CHECK_THROWS_AS(KernelSpec("bad", [](double s) { return 0.5 * (1 - s * s); }, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec("odd", [](double s) { return (1 - s) * (1 - s * s); }, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec("edge", [](double s) { return (1 - s * s) * (1 - s * s); }, 3.0, 4.0), ConfigError);
  // second moment diverges for rho <= 2
  const KernelSpec tri("tri", [](double s) { return 1 - s * s; }, 1.0, 2.0);
  CHECK_THROWS_AS(kernel_moments(tri), NumericalFailure);
  const auto names = builtin_kernel_names();
  CHECK(names.size() == 2);
}
