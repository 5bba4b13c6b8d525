#pragma once

#include "voldens/rng.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace voldens {

/// dX = -a (X - mu) dt + b dW, stationary law N(mu, b^2 / (2a)).
struct OUParams
{
  double a = 1.0;
  double mu = 0.0;
  double b = 1.0;

  double stationary_variance() const noexcept { return b * b / (2.0 * a); }
  /// Throws ConfigError unless a > 0 and b > 0.
  void validate() const;
};

/// Two-state chain U with intensity a0 for 0 -> 1 and a1 for 1 -> 0, and the
/// switching process xi = U X^1 + (1 - U) X^0 with independent OU components.
struct RegimeSwitchParams
{
  double a0 = 1.0;
  double a1 = 1.0;
  OUParams ou0;
  OUParams ou1;

  /// pi_i = a_{1-i} / (a0 + a1).
  std::array<double, 2> stationary() const noexcept;
  void validate() const;
};

/// Exact OU recursion X_{k+1} = mu + (X_k - mu) e^{-a dt} + eta_k with X_0
/// drawn from the stationary law. Returns n_steps + 1 values X_0..X_n.
std::vector<double> simulate_ou(const OUParams& params, std::size_t n_steps, double dt, std::uint64_t seed);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Q(t) with q[i][j] = P(U_t = i | U_0 = j); columns sum to one.
Matrix2 markov_transition(double a0, double a1, double t);

/// Chain states on the grid k dt, k = 0..n_steps, by exact event-driven
/// simulation with exponential holding times and U_0 ~ pi.
std::vector<int> simulate_chain(double a0, double a1, std::size_t n_steps, double dt, std::uint64_t seed);

struct RegimePath
{
  std::vector<double> xi;
  std::vector<int> state;
};

/// xi on the grid k dt, k = 0..n_steps, with chain and components driven by
/// independent substreams of `seed`. The volatility is sigma = exp(xi).
RegimePath simulate_regime_path(const RegimeSwitchParams& params,
                                std::size_t n_steps,
                                double dt,
                                std::uint64_t seed);

std::vector<double> simulate_regime_switch(const RegimeSwitchParams& params,
                                           std::size_t n_steps,
                                           double dt,
                                           std::uint64_t seed);

using DriftFn = std::function<double(double)>;

/// Normalized increments X_i = (S_{i delta} - S_{(i-1) delta}) / sqrt(delta)
/// of dS = b_t dt + sigma_t dW, summed over the fine substeps with sigma and
/// drift taken at left endpoints. sigma2_path[k] is sigma^2 at k fine_dt; the
/// number of increments is sigma2_path.size() / (delta / fine_dt).
/// Throws ConfigError unless delta / fine_dt is an integer >= 10.
std::vector<double> integrate_price(std::span<const double> sigma2_path,
                                    double fine_dt,
                                    double delta,
                                    const DriftFn& drift,
                                    std::uint64_t seed);

/// Subgrid ratio delta / fine_dt, validated as an integer >= min_ratio.
std::size_t substep_ratio(double fine_dt, double delta, std::size_t min_ratio = 10);

enum class ModelKind
{
  ou,     ///< log sigma^2 is an OU process
  regime, ///< sigma = exp(xi), xi regime-switching OU
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct ModelSpec
{
  ModelKind kind = ModelKind::ou;
  OUParams ou;               ///< used by ModelKind::ou
  RegimeSwitchParams regime; ///< used by ModelKind::regime
  double drift = 0.0;        ///< constant drift b_t

  void validate() const;
};

inline constexpr std::size_t kDefaultSubsteps = 50;

struct PathBundle
{
  double fine_dt = 0.0;
  std::vector<double> sigma2; ///< sigma^2 at k fine_dt, k = 0..n * substeps
  std::vector<double> increments;
  double delta = 0.0;
  std::uint64_t seed = 0;

  std::size_t substeps() const noexcept;
  /// sigma^2 at (i - 1) delta for 1-based increment index i.
  double sigma2_at_block_start(std::size_t i) const;
};

/// sigma path from substream kStreamVolatility of `seed` and price noise
/// from kStreamPriceNoise.
PathBundle simulate_path(const ModelSpec& model,
                         std::size_t n,
                         double delta,
                         std::size_t substeps,
                         std::uint64_t seed);

/// log sigma^2 on the fine grid, k = 0..n_fine.
std::vector<double> simulate_log_variance(const ModelSpec& model,
                                          std::size_t n_fine,
                                          double fine_dt,
                                          std::uint64_t seed);

} // namespace voldens
