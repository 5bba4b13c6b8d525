#include "voldens/analytic_truth.hpp"

#include "voldens/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace voldens {

namespace {

double
normal_pdf(double x, double mean, double var)
{
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// Stationary bivariate normal of an OU pair with correlation rho.
double
ou_pair_pdf(double x, double y, double mean, double var, double rho)
{
  const double zx = (x - mean);
  const double zy = (y - mean);
  const double one_m = -std::expm1(std::log(rho) * 2.0); // 1 - rho^2
  const double q = (zx * zx - 2.0 * rho * zx * zy + zy * zy) / (var * one_m);
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * var * std::sqrt(one_m));
}

void
check_times(double s, double t)
{
  if (!(s < t))
    throw DomainError("bivariate density needs s < t");
}

} // namespace

TruthDensity
ou_logsq_marginal(const OUParams& params)
{
  params.validate();
  const double mean = params.mu;
  const double var = params.stationary_variance();
  std::ostringstream d;
  d << "OU stationary marginal N(" << mean << ", " << var << ")";
  return { 1, [=](std::span<const double> x) { return normal_pdf(x[0], mean, var); }, d.str() };
}

TruthDensity
ou_bivariate(const OUParams& params, double s, double t)
{
  params.validate();
  check_times(s, t);
  const double mean = params.mu;
  const double var = params.stationary_variance();
  const double rho = std::exp(-params.a * (t - s));
  std::ostringstream d;
  d << "OU bivariate, correlation " << rho;
  return { 2,
           [=](std::span<const double> x) { return ou_pair_pdf(x[0], x[1], mean, var, rho); },
           d.str() };
}

TruthDensity
regime_marginal(const RegimeSwitchParams& params, Scale scale)
{
  params.validate();
  const auto pi = params.stationary();
  const double c = scale == Scale::log_variance ? 2.0 : 1.0;
  const double m0 = params.ou0.mu, v0 = params.ou0.stationary_variance();
  const double m1 = params.ou1.mu, v1 = params.ou1.stationary_variance();
  return { 1,
           [=](std::span<const double> x) {
             const double u = x[0] / c;
             return (pi[0] * normal_pdf(u, m0, v0) + pi[1] * normal_pdf(u, m1, v1)) / c;
           },
           "regime-switching marginal" };
}

TruthDensity
regime_bivariate(const RegimeSwitchParams& params, double s, double t, Scale scale)
{
  params.validate();
  check_times(s, t);
  const auto pi = params.stationary();
  const Matrix2 q = markov_transition(params.a0, params.a1, t - s);
  const double c = scale == Scale::log_variance ? 2.0 : 1.0;
  const double m0 = params.ou0.mu, v0 = params.ou0.stationary_variance();
  const double m1 = params.ou1.mu, v1 = params.ou1.stationary_variance();
  const double r0 = std::exp(-params.ou0.a * (t - s));
  const double r1 = std::exp(-params.ou1.a * (t - s));
  return { 2,
           [=](std::span<const double> p) {
             const double x = p[0] / c;
             const double y = p[1] / c;
             const double f =
               q[1][1] * pi[1] * ou_pair_pdf(x, y, m1, v1, r1) +
               q[1][0] * pi[0] * normal_pdf(x, m0, v0) * normal_pdf(y, m1, v1) +
               q[0][1] * pi[1] * normal_pdf(x, m1, v1) * normal_pdf(y, m0, v0) +
               q[0][0] * pi[0] * ou_pair_pdf(x, y, m0, v0, r0);
             return f / (c * c);
           },
           "regime-switching bivariate mixture" };
}

TruthDensity
invariant_density_1d(std::function<double(double)> drift,
                     std::function<double(double)> diffusion,
                     double lo,
                     double hi,
                     double x0)
{
  using boost::math::quadrature::gauss_kronrod;
  if (!(lo < hi) || !(x0 > lo && x0 < hi))
    throw DomainError("invariant_density_1d: need lo < x0 < hi");

  auto ratio = [drift, diffusion](double y) {
    const double a = diffusion(y);
    return drift(y) / (a * a);
  };
  auto log_unnormalized = [ratio, diffusion, x0](double x) {
    const double a = diffusion(x);
    if (!(a > 0.0))
      throw DomainError("invariant_density_1d: diffusion coefficient must be positive");
    const double inner = gauss_kronrod<double, 61>::integrate(ratio, x0, x, 15, 1e-13);
    return 2.0 * inner - 2.0 * std::log(a);
  };

  double error = 0.0;
  double mass = 0.0;
  try {
    mass = gauss_kronrod<double, 61>::integrate(
      [&](double x) { return std::exp(log_unnormalized(x)); }, lo, hi, 15, 1e-11, &error);
  } catch (const std::exception&) {
    mass = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(mass) || !(mass > 0.0) || !(error <= 1e-6 * mass))
    throw DomainError("not positive recurrent on the given interval: normalization diverges");

  const double log_mass = std::log(mass);
  return { 1,
           [=](std::span<const double> x) {
             if (!(x[0] > lo && x[0] < hi))
               return 0.0;
             return std::exp(log_unnormalized(x[0]) - log_mass);
           },
           "invariant density from drift and diffusion" };
}

TruthDensity
truth_for_model(const ModelSpec& model, std::span<const double> times)
{
  if (times.size() == 1) {
    if (model.kind == ModelKind::ou)
      return ou_logsq_marginal(model.ou);
    return regime_marginal(model.regime, Scale::log_variance);
  }
  if (times.size() == 2) {
    if (model.kind == ModelKind::ou)
      return ou_bivariate(model.ou, times[0], times[1]);
    return regime_bivariate(model.regime, times[0], times[1], Scale::log_variance);
  }
  throw InputError("truth densities are available for p = 1 and p = 2 only");
}

std::pair<double, double>
log_variance_moments(const ModelSpec& model)
{
  if (model.kind == ModelKind::ou)
    return { model.ou.mu, std::sqrt(model.ou.stationary_variance()) };
  const auto pi = model.regime.stationary();
  const auto& c0 = model.regime.ou0;
  const auto& c1 = model.regime.ou1;
  const double mean = pi[0] * c0.mu + pi[1] * c1.mu;
  const double second = pi[0] * (c0.stationary_variance() + c0.mu * c0.mu) +
                        pi[1] * (c1.stationary_variance() + c1.mu * c1.mu);
  return { 2.0 * mean, 2.0 * std::sqrt(second - mean * mean) };
}

} // namespace voldens
