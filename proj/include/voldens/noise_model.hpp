#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace voldens {

/// Largest |t| accepted by phi_k: there |phi_k(t)| ~ e^{-300}, and the ratio
/// phi_w / phi_k would overflow beyond it.
inline constexpr double kPhiKMaxT = 600.0 / std::numbers::pi;

/// Density of log(Z^2), Z standard normal:
/// k(x) = (2 pi)^{-1/2} exp(x/2 - e^x/2).
double noise_density(double x);

/// P(log Z^2 <= x) = erf(e^{x/2} / sqrt 2).
double noise_cdf(double x);

/// log Gamma(z) for Re z >= 1/2, Lanczos approximation (g = 7, 9 terms).
/// The imaginary part is the phase modulo 2 pi.
std::complex<double> log_gamma(std::complex<double> z);

/// log phi_k(t) = -log(pi)/2 + i t log 2 + log Gamma(1/2 + i t).
/// Throws RangeError for |t| > kPhiKMaxT.
std::complex<double> log_phi_k(double t);

/// phi_k(t) = pi^{-1/2} 2^{it} Gamma(1/2 + it), characteristic function of k.
std::complex<double> phi_k(double t);

/// log(Z_i^2) for `count` i.i.d. standard normals drawn from a generator
/// seeded with `seed`.
std::vector<double> sample_noise(std::size_t count, std::uint64_t seed);

} // namespace voldens
