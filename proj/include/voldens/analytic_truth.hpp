#pragma once

#include "voldens/vol_sim.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace voldens {

/// A closed-form target density on R^p.
struct TruthDensity
{
  std::size_t dimension = 1;
  std::function<double(std::span<const double>)> evaluator;
  std::string description;

  double operator()(std::span<const double> x) const { return evaluator(x); }
  double operator()(std::initializer_list<double> x) const
  {
    return evaluator(std::span<const double>(x.begin(), x.size()));
  }
};

/// N(mu, b^2/(2a)): the marginal of log sigma^2 when it follows OU(a, mu, b).
TruthDensity ou_logsq_marginal(const OUParams& params);

/// Joint law of (X_s, X_t) for a stationary OU process: bivariate normal
/// with correlation e^{-a(t-s)}. Throws DomainError unless s < t.
TruthDensity ou_bivariate(const OUParams& params, double s, double t);

/// Coordinate scale of the regime-switching densities.
enum class Scale
{
  log_variance, ///< log sigma^2 = 2 xi (the estimator's scale)
  xi,           ///< the switching process itself
};

/// pi_0 f^0 + pi_1 f^1.
TruthDensity regime_marginal(const RegimeSwitchParams& params, Scale scale = Scale::log_variance);

/// f_{s,t}(x, y) = q11 pi1 f1_{st}(x,y) + q10 pi0 f0(x) f1(y)
///              + q01 pi1 f1(x) f0(y) + q00 pi0 f0_{st}(x,y)
/// with q_ij = q_ij(t - s). On the log-variance scale each axis carries the
/// Jacobian 1/2. Throws DomainError unless s < t.
TruthDensity regime_bivariate(const RegimeSwitchParams& params,
                              double s,
                              double t,
                              Scale scale = Scale::log_variance);

/// Invariant density of dX = b(X) dt + a(X) dB on (lo, hi):
/// C a(x)^{-2} exp(2 int_{x0}^x b(y)/a(y)^2 dy), normalized by adaptive
/// quadrature (infinite bounds allowed). Throws DomainError if the
/// normalization diverges or a is not positive.
TruthDensity invariant_density_1d(std::function<double(double)> drift,
                                  std::function<double(double)> diffusion,
                                  double lo,
                                  double hi,
                                  double x0);

/// Truth for the joint law of log sigma^2 at `times` under `model`
/// (p = 1 or p = 2).
TruthDensity truth_for_model(const ModelSpec& model, std::span<const double> times);

/// Mean and standard deviation of the stationary log sigma^2 marginal.
std::pair<double, double> log_variance_moments(const ModelSpec& model);

} // namespace voldens
