#include "voldens/vol_sim.hpp"

#include "voldens/errors.hpp"

#include <cmath>
#include <random>

namespace voldens {

void
OUParams::validate() const
{
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(mu))
    throw ConfigError("OU parameters need a > 0, b > 0 and finite mu");
}

std::array<double, 2>
RegimeSwitchParams::stationary() const noexcept
{
  const double total = a0 + a1;
  return { a1 / total, a0 / total };
}

void
RegimeSwitchParams::validate() const
{
  if (!(a0 > 0.0) || !(a1 > 0.0))
    throw ConfigError("regime intensities a0, a1 must be positive");
  ou0.validate();
  ou1.validate();
}

namespace {

std::vector<double>
ou_path(const OUParams& p, std::size_t n_steps, double dt, Rng& rng)
{
  std::normal_distribution<double> normal;
  const double decay = std::exp(-p.a * dt);
  const double sd_stat = std::sqrt(p.stationary_variance());
  const double sd_step = sd_stat * std::sqrt(-std::expm1(-2.0 * p.a * dt));
  std::vector<double> x(n_steps + 1);
  x[0] = p.mu + sd_stat * normal(rng);
  for (std::size_t k = 0; k < n_steps; ++k)
    x[k + 1] = p.mu + (x[k] - p.mu) * decay + sd_step * normal(rng);
  return x;
}

} // namespace

std::vector<double>
simulate_ou(const OUParams& params, std::size_t n_steps, double dt, std::uint64_t seed)
{
  params.validate();
  if (n_steps < 1 || !(dt > 0.0))
    throw InputError("simulate_ou: need n_steps >= 1 and dt > 0");
  Rng rng(seed);
  return ou_path(params, n_steps, dt, rng);
}

Matrix2
markov_transition(double a0, double a1, double t)
{
  if (!(a0 > 0.0) || !(a1 > 0.0))
    throw ConfigError("markov_transition: intensities must be positive");
  if (!(t >= 0.0))
    throw DomainError("markov_transition: t must be nonnegative");
  const double total = a0 + a1;
  const double e = std::exp(-total * t);
  Matrix2 q;
  q[0][0] = (a1 + a0 * e) / total;
  q[0][1] = (a1 - a1 * e) / total;
  q[1][0] = (a0 - a0 * e) / total;
  q[1][1] = (a0 + a1 * e) / total;
  return q;
}

std::vector<int>
simulate_chain(double a0, double a1, std::size_t n_steps, double dt, std::uint64_t seed)
{
  if (!(a0 > 0.0) || !(a1 > 0.0))
    throw ConfigError("simulate_chain: intensities must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform;
  const double pi1 = a0 / (a0 + a1);
  int state = uniform(rng) < pi1 ? 1 : 0;
  const double rate[2] = { a0, a1 };

  std::vector<int> out(n_steps + 1);
  double next_jump = std::exponential_distribution<double>(rate[state])(rng);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = dt * static_cast<double>(k);
    while (next_jump <= t) {
      state = 1 - state;
      next_jump += std::exponential_distribution<double>(rate[state])(rng);
    }
    out[k] = state;
  }
  return out;
}

RegimePath
simulate_regime_path(const RegimeSwitchParams& params, std::size_t n_steps, double dt, std::uint64_t seed)
{
  params.validate();
  if (n_steps < 1 || !(dt > 0.0))
    throw InputError("simulate_regime_switch: need n_steps >= 1 and dt > 0");
  RegimePath path;
  path.state = simulate_chain(params.a0, params.a1, n_steps, dt, derive_seed(seed, kStreamChain));
  const auto x0 = simulate_ou(params.ou0, n_steps, dt, derive_seed(seed, kStreamOu0));
  const auto x1 = simulate_ou(params.ou1, n_steps, dt, derive_seed(seed, kStreamOu1));
  path.xi.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k)
    path.xi[k] = path.state[k] == 1 ? x1[k] : x0[k];
  return path;
}

std::vector<double>
simulate_regime_switch(const RegimeSwitchParams& params, std::size_t n_steps, double dt, std::uint64_t seed)
{
  return simulate_regime_path(params, n_steps, dt, seed).xi;
}

std::size_t
substep_ratio(double fine_dt, double delta, std::size_t min_ratio)
{
  if (!(fine_dt > 0.0) || !(delta > 0.0))
    throw ConfigError("substep ratio: fine_dt and delta must be positive");
  const double q = delta / fine_dt;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q) || r < static_cast<double>(min_ratio))
    throw ConfigError("delta / fine_dt = " + std::to_string(q) + " must be an integer >= " +
                      std::to_string(min_ratio));
  return static_cast<std::size_t>(r);
}

std::vector<double>
integrate_price(std::span<const double> sigma2_path,
                double fine_dt,
                double delta,
                const DriftFn& drift,
                std::uint64_t seed)
{
  const std::size_t ratio = substep_ratio(fine_dt, delta);
  const std::size_t n = sigma2_path.size() / ratio;
  if (n == 0)
    throw InputError("integrate_price: volatility path shorter than one block");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  const double sqrt_dt = std::sqrt(fine_dt);
  const double scale = 1.0 / std::sqrt(delta);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ds = 0.0;
    for (std::size_t s = 0; s < ratio; ++s) {
      const std::size_t k = i * ratio + s;
      const double dw = sqrt_dt * normal(rng);
      double step = std::sqrt(sigma2_path[k]) * dw;
      if (drift)
        step += drift(fine_dt * static_cast<double>(k)) * fine_dt;
      ds += step;
    }
    x[i] = ds * scale;
  }
  return x;
}

std::string
to_string(ModelKind kind)
{
  return kind == ModelKind::ou ? "ou" : "regime";
}

ModelKind
parse_model_kind(const std::string& name)
{
  if (name == "ou")
    return ModelKind::ou;
  if (name == "regime")
    return ModelKind::regime;
  throw ConfigError("unknown model '" + name + "' (expected ou or regime)");
}

void
ModelSpec::validate() const
{
  if (kind == ModelKind::ou)
    ou.validate();
  else
    regime.validate();
  if (!std::isfinite(drift))
    throw ConfigError("drift must be finite");
}

std::size_t
PathBundle::substeps() const noexcept
{
  return static_cast<std::size_t>(std::round(delta / fine_dt));
}

double
PathBundle::sigma2_at_block_start(std::size_t i) const
{
  if (i < 1 || i > increments.size())
    throw IndexError("sigma2_at_block_start: increment index out of range");
  return sigma2[(i - 1) * substeps()];
}

std::vector<double>
simulate_log_variance(const ModelSpec& model, std::size_t n_fine, double fine_dt, std::uint64_t seed)
{
  model.validate();
  if (model.kind == ModelKind::ou)
    return simulate_ou(model.ou, n_fine, fine_dt, seed);
  auto xi = simulate_regime_switch(model.regime, n_fine, fine_dt, seed);
  for (auto& v : xi)
    v *= 2.0;
  return xi;
}

PathBundle
simulate_path(const ModelSpec& model, std::size_t n, double delta, std::size_t substeps, std::uint64_t seed)
{
  if (n < 1)
    throw InputError("simulate_path: n must be at least 1");
  if (substeps < 10)
    throw ConfigError("simulate_path: need at least 10 substeps per delta");
  PathBundle bundle;
  bundle.delta = delta;
  bundle.fine_dt = delta / static_cast<double>(substeps);
  bundle.seed = seed;
  bundle.sigma2 = simulate_log_variance(model, n * substeps, bundle.fine_dt, derive_seed(seed, kStreamVolatility));
  for (auto& v : bundle.sigma2)
    v = std::exp(v);
  DriftFn drift;
  if (model.drift != 0.0)
    drift = [b = model.drift](double) { return b; };
  bundle.increments = integrate_price(bundle.sigma2, bundle.fine_dt, delta, drift, derive_seed(seed, kStreamPriceNoise));
  return bundle;
}

} // namespace voldens
