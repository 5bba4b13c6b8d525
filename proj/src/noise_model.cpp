#include "voldens/noise_model.hpp"

#include "voldens/errors.hpp"
#include "voldens/rng.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace voldens {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs{ 0.99999999999980993,     676.5203681218851,
                                                -1259.1392167224028,     771.32342877765313,
                                                -176.61502916214059,     12.507343278686905,
                                                -0.13857109526572012,    9.9843695780195716e-6,
                                                1.5056327351493116e-7 };

} // namespace

double
noise_density(double x)
{
  // exp(-e^x/2) underflows cleanly to 0 for large x.
  return std::exp(0.5 * x - 0.5 * std::exp(x)) / std::sqrt(2.0 * std::numbers::pi);
}

double
noise_cdf(double x)
{
  return std::erf(std::exp(0.5 * x) / std::numbers::sqrt2);
}

std::complex<double>
log_gamma(std::complex<double> z)
{
  if (z.real() < 0.5)
    throw DomainError("log_gamma: requires Re z >= 1/2");
  z -= 1.0;
  std::complex<double> series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i)
    series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

std::complex<double>
log_phi_k(double t)
{
  if (!(std::abs(t) <= kPhiKMaxT))
    throw RangeError("phi_k: |t| = " + std::to_string(std::abs(t)) + " exceeds t_max = " +
                     std::to_string(kPhiKMaxT));
  const std::complex<double> phase(0.0, t * std::numbers::ln2);
  return -0.5 * std::log(std::numbers::pi) + phase + log_gamma({ 0.5, t });
}

std::complex<double>
phi_k(double t)
{
  return std::exp(log_phi_k(t));
}

std::vector<double>
sample_noise(std::size_t count, std::uint64_t seed)
{
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> out(count);
  for (auto& v : out) {
    const double z = normal(rng);
    v = std::log(z * z);
  }
  return out;
}

} // namespace voldens
