#include "voldens/estimator.hpp"

#include "voldens/errors.hpp"
#include "voldens/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace voldens {

std::size_t
ObservationSet::effective_count() const noexcept
{
  if (index_offsets.empty())
    return 0;
  const std::size_t spread = index_offsets.back() - index_offsets.front();
  return spread >= log_sq.size() ? 0 : log_sq.size() - spread;
}

std::size_t
lattice_offset(double t, double delta)
{
  const double q = t / delta;
  return static_cast<std::size_t>(std::floor(q + 1e-9 * std::max(1.0, std::abs(q))));
}

ObservationSet
make_observation_set(std::vector<double> log_sq, double delta, std::vector<double> times)
{
  if (!(delta > 0.0))
    throw InputError("observation set: delta must be positive");
  if (times.empty())
    throw InputError("observation set: need at least one target time");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0))
      throw InputError("observation set: target times must be positive");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw InputError("observation set: target times must be strictly increasing");
  }
  ObservationSet obs;
  obs.delta = delta;
  obs.log_sq = std::move(log_sq);
  obs.times = std::move(times);
  for (double t : obs.times)
    obs.index_offsets.push_back(lattice_offset(t, delta));
  return obs;
}

std::vector<double>
normalized_increments(std::span<const double> prices, double delta)
{
  if (prices.size() < 2)
    throw InputError("normalized_increments: need at least 2 price points");
  if (!(delta > 0.0))
    throw InputError("normalized_increments: delta must be positive");
  const double scale = 1.0 / std::sqrt(delta);
  std::vector<double> x(prices.size() - 1);
  for (std::size_t i = 0; i + 1 < prices.size(); ++i)
    x[i] = (prices[i + 1] - prices[i]) * scale;
  return x;
}

LogSquareResult
log_square_transform(std::span<const double> x, double clamp_floor)
{
  if (!(clamp_floor > 0.0))
    throw InputError("log_square_transform: clamp floor must be positive");
  const double floor_sq = clamp_floor * clamp_floor;
  LogSquareResult out;
  out.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sq = x[i] * x[i];
    if (!(sq >= floor_sq)) {
      sq = floor_sq;
      ++out.clamped;
    }
    out.values[i] = std::log(sq);
  }
  return out;
}

std::vector<double>
make_observation_vector(const ObservationSet& obs, std::size_t j)
{
  const std::size_t m = obs.effective_count();
  if (j < 1 || j > m)
    throw IndexError("observation vector index " + std::to_string(j) + " outside [1, " +
                     std::to_string(m) + "]");
  std::vector<double> y(obs.dimension());
  const std::size_t first = obs.index_offsets.front();
  for (std::size_t k = 0; k < y.size(); ++k)
    y[k] = obs.log_sq[obs.index_offsets[k] - first + j - 1];
  return y;
}

BandwidthChoice
default_bandwidth(std::size_t n, std::size_t p, const EstimatorConfig& cfg)
{
  if (n < 2)
    throw InputError("default_bandwidth: n must be at least 2");
  const double log_n = std::log(static_cast<double>(n));
  BandwidthChoice out;
  out.h = cfg.bandwidth_override ? *cfg.bandwidth_override : cfg.gamma * std::numbers::pi / log_n;
  out.delta = std::pow(static_cast<double>(n), -cfg.delta_exp);
  out.gamma_threshold = 4.0 * static_cast<double>(p) / cfg.delta_exp;
  out.condition_met = cfg.gamma > out.gamma_threshold;
  if (!out.condition_met) {
    std::ostringstream msg;
    msg << "gamma = " << cfg.gamma << " does not exceed 4p/delta = " << out.gamma_threshold
        << " (p = " << p << ", delta = " << cfg.delta_exp
        << "); rate results do not cover this bandwidth";
    out.warning = msg.str();
  }
  if (!(out.h > 0.0))
    throw InputError("default_bandwidth: bandwidth must be positive");
  return out;
}

namespace {

template<class Factor>
DensityGrid
accumulate(const ObservationSet& obs,
           double h,
           std::vector<std::vector<double>> axes,
           std::size_t workers,
           Factor&& factor)
{
  const std::size_t p = obs.dimension();
  if (axes.size() != p)
    throw InputError("estimate: grid rank " + std::to_string(axes.size()) +
                     " does not match observation dimension " + std::to_string(p));
  for (const auto& a : axes)
    if (a.empty())
      throw InputError("estimate: empty grid axis");
  const std::size_t m = obs.effective_count();
  if (m == 0)
    throw InputError("series too short for requested time spread");

  DensityGrid grid(std::move(axes));
  const auto& ax = grid.axes();
  const std::size_t rows = ax[0].size();
  std::size_t inner = 1;
  for (std::size_t k = 1; k < p; ++k)
    inner *= ax[k].size();

  std::vector<std::size_t> shift(p);
  for (std::size_t k = 0; k < p; ++k)
    shift[k] = obs.index_offsets[k] - obs.index_offsets[0];

  const double inv_h = 1.0 / h;
  const double norm = 1.0 / (static_cast<double>(m) * std::pow(h, static_cast<double>(p)));
  auto values = grid.values();

  if (workers == 0)
    workers = worker_count();
  const std::size_t chunks = std::min(rows, workers);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t r0 = rows * c / chunks;
    const std::size_t r1 = rows * (c + 1) / chunks;
    std::vector<std::vector<double>> f(p);
    f[0].resize(r1 - r0);
    for (std::size_t k = 1; k < p; ++k)
      f[k].resize(ax[k].size());
    // Products over axes 1..p-1, last axis fastest.
    std::vector<double> tail(inner);
    std::vector<double> acc((r1 - r0) * inner, 0.0);

    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t r = r0; r < r1; ++r)
        f[0][r - r0] = factor((ax[0][r] - obs.log_sq[j]) * inv_h);
      for (std::size_t k = 1; k < p; ++k) {
        const double y = obs.log_sq[j + shift[k]];
        for (std::size_t i = 0; i < ax[k].size(); ++i)
          f[k][i] = factor((ax[k][i] - y) * inv_h);
      }
      if (p == 1) {
        for (std::size_t r = 0; r < r1 - r0; ++r)
          acc[r] += f[0][r];
        continue;
      }
      std::size_t len = 1;
      tail[0] = 1.0;
      for (std::size_t k = p - 1; k >= 1; --k) {
        const std::size_t nk = ax[k].size();
        // tail <- f[k] (outer) tail, keeping the last axis fastest.
        for (std::size_t i = nk; i-- > 0;)
          for (std::size_t q = len; q-- > 0;)
            tail[i * len + q] = f[k][i] * tail[q];
        len *= nk;
      }
      for (std::size_t r = 0; r < r1 - r0; ++r) {
        const double a = f[0][r];
        double* out = acc.data() + r * inner;
        for (std::size_t q = 0; q < inner; ++q)
          out[q] += a * tail[q];
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
      values[r0 * inner + i] = acc[i] * norm;
  }, chunks);
  return grid;
}

} // namespace

DensityGrid
estimate_density(const ObservationSet& obs,
                 const DeconvTable& table,
                 std::vector<std::vector<double>> axes,
                 std::size_t workers)
{
  return accumulate(obs, table.bandwidth(), std::move(axes), workers, [&](double u) { return table(u); });
}

DeconvTable
table_for_observations(const ObservationSet& obs,
                       const KernelSpec& kernel,
                       double h,
                       const std::vector<std::vector<double>>& axes)
{
  if (obs.log_sq.empty())
    throw InputError("table_for_observations: no observations");
  if (!(h > 0.0))
    throw InputError("table_for_observations: bandwidth must be positive");
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  for (const auto& a : axes)
    for (double x : a) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
    }
  if (!(x_lo <= x_hi))
    throw InputError("table_for_observations: empty grid");
  const auto [y_lo, y_hi] = std::minmax_element(obs.log_sq.begin(), obs.log_sq.end());
  const double u_min = (x_lo - *y_hi) / h - 1.0;
  const double u_max = (x_hi - *y_lo) / h + 1.0;
  constexpr double kSpacing = 80.0 / 4095.0;
  const auto points = std::max<std::size_t>(
    256, static_cast<std::size_t>(std::ceil((u_max - u_min) / kSpacing)) + 1);
  return DeconvTable::build(kernel, h, u_min, u_max, points);
}

DensityGrid
kernel_smoother(const ObservationSet& obs,
                const KernelSpec& kernel,
                double h,
                std::vector<std::vector<double>> axes,
                std::size_t workers)
{
  if (!(h > 0.0))
    throw InputError("kernel_smoother: bandwidth must be positive");
  return accumulate(obs, h, std::move(axes), workers, [&](double u) { return eval_w(kernel, u); });
}

} // namespace voldens
