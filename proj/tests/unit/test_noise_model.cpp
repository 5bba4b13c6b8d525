#include "voldens/errors.hpp"
#include "voldens/noise_model.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace voldens;
using cd = std::complex<double>;

// phi_k and log Gamma references from 30-digit arithmetic
TEST_CASE("phi_k reference values")
{
  struct Case { double t, re, im; };
  for (const Case c : { Case{ 0.3, 0.78134535972621995, -0.25708149605395403 },
                        Case{ 1.7, 0.089962333210766559, 0.038620150434622389 },
                        Case{ 5.0, 0.00053351458781428113, 0.00012948219826433204 },
                        Case{ 12.5, -3.6122983984162765e-9, 2.1410918952948986e-9 } }) {
    const cd z = phi_k(c.t);
    const double scale = std::hypot(c.re, c.im);
    CHECK(std::abs(z - cd(c.re, c.im)) < 1e-13 * scale);
    CHECK(std::abs(phi_k(-c.t) - std::conj(z)) < 1e-15 * scale);
  }
  CHECK(std::abs(phi_k(0.0) - cd(1.0, 0.0)) < 1e-15);
}

TEST_CASE("log_gamma")
{
  CHECK(log_gamma(cd(0.5, 0)).real() == doctest::Approx(0.57236494292470009).epsilon(1e-14));
  CHECK(std::abs(log_gamma(cd(1, 0))) < 1e-14);
  CHECK(std::abs(log_gamma(cd(2, 0))) < 1e-14);
  const cd g = log_gamma(cd(3.7, -2.1));
  CHECK(g.real() == doctest::Approx(0.78534695807382239).epsilon(1e-14));
  CHECK(std::abs(std::exp(cd(0, g.imag())) - std::exp(cd(0, -2.5830129251152622))) < 1e-13);
  const cd big = log_gamma(cd(0.5, 40.0));
  CHECK(big.real() == doctest::Approx(-61.912914538591192).epsilon(1e-13));
  CHECK(std::abs(std::exp(cd(0, big.imag())) - std::exp(cd(0, 107.55621986920906))) < 1e-11);
  CHECK_THROWS_AS(log_gamma(cd(0.2, 1.0)), DomainError);
}

TEST_CASE("modulus identity and range guard")
{
  for (double t = -30.0; t <= 30.0; t += 0.37)
    CHECK(std::norm(phi_k(t)) * std::cosh(M_PI * t) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::isfinite(log_phi_k(kPhiKMaxT).real()));
  CHECK_THROWS_AS(log_phi_k(kPhiKMaxT * 1.0001), RangeError);
  CHECK_THROWS_AS(phi_k(-200.0), RangeError);
}

TEST_CASE("noise density and cdf")
{
  CHECK(noise_density(-3.0) == doctest::Approx(0.086827484356088963).epsilon(1e-14));
  CHECK(noise_density(0.0) == doctest::Approx(0.24197072451914335).epsilon(1e-14));
  CHECK(noise_density(1.5) == doctest::Approx(0.089834780463641989).epsilon(1e-14));
  CHECK(noise_cdf(-3.0) == doctest::Approx(0.1765657943905388).epsilon(1e-14));
  CHECK(noise_cdf(0.0) == doctest::Approx(0.6826894921370859).epsilon(1e-14));
  CHECK(noise_cdf(1.5) == doctest::Approx(0.96574015361655059).epsilon(1e-14));
  CHECK(noise_density(-800.0) == doctest::Approx(std::exp(-400.0) / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(noise_density(800.0) == 0.0);
}

TEST_CASE("sampled noise has the log-chi-square mean and variance")
{
  // E log Z^2 = -(euler gamma) - log 2, Var = pi^2 / 2
  const auto x = sample_noise(200000, 17);
  double m = 0.0;
  for (double v : x)
    m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x)
    s += (v - m) * (v - m);
  s /= static_cast<double>(x.size() - 1);
  const double mean = -0.57721566490153286 - std::log(2.0);
  CHECK(std::abs(m - mean) < 4.0 * std::sqrt(M_PI * M_PI / 2.0 / 200000.0));
  CHECK(s == doctest::Approx(M_PI * M_PI / 2.0).epsilon(0.03));
  CHECK(sample_noise(10, 17) == sample_noise(10, 17));
  CHECK(sample_noise(10, 17) != sample_noise(10, 18));
}
