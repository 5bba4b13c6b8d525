#pragma once

#include "voldens/deconv_kernel.hpp"
#include "voldens/density_grid.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voldens {

/// Log-square observations log((X_i)^2), i = 1..n, with the target times
/// t_1 < ... < t_p and their lattice offsets i_k = floor(t_k / delta).
///
/// Indices j and i are 1-based as in the estimator's sums; log_sq is stored
/// 0-based, so observation i lives at log_sq[i - 1].
struct ObservationSet
{
  double delta = 0.0;
  std::vector<double> log_sq;
  std::vector<double> times;
  std::vector<std::size_t> index_offsets;

  std::size_t size() const noexcept { return log_sq.size(); }
  std::size_t dimension() const noexcept { return times.size(); }

  /// m = n - i_p + i_1, the number of observation vectors (0 if negative).
  std::size_t effective_count() const noexcept;
};

/// Builds an ObservationSet; throws InputError unless delta > 0 and the
/// times are positive and strictly increasing.
ObservationSet make_observation_set(std::vector<double> log_sq, double delta, std::vector<double> times);

/// floor(t / delta), with a 1e-9 relative allowance so that exact multiples
/// survive binary rounding (floor(1.5 / 0.1) = 15).
std::size_t lattice_offset(double t, double delta);

/// X_i = (S_{i delta} - S_{(i-1) delta}) / sqrt(delta) for n + 1 prices.
std::vector<double> normalized_increments(std::span<const double> prices, double delta);

struct LogSquareResult
{
  std::vector<double> values;
  std::size_t clamped = 0;  ///< entries with |x| below the floor
};

inline constexpr double kDefaultClampFloor = 1e-12;

/// log(max(x^2, floor^2)).
LogSquareResult log_square_transform(std::span<const double> x, double clamp_floor = kDefaultClampFloor);

/// The j-th observation vector (1-based j): component k is log_sq at the
/// 1-based position i_k - i_1 + j. Throws IndexError outside [1, m].
std::vector<double> make_observation_vector(const ObservationSet& obs, std::size_t j);

struct EstimatorConfig
{
  double gamma = 9.0;
  double delta_exp = 0.5;
  std::optional<double> bandwidth_override;
};

struct BandwidthChoice
{
  double h;               ///< gamma pi / log n, or the override
  double delta;           ///< companion sampling gap n^{-delta_exp}
  double gamma_threshold; ///< 4 p / delta_exp
  bool condition_met;     ///< gamma > 4 p / delta_exp
  std::optional<std::string> warning;
};

/// Bandwidth h = gamma pi / log n. Throws InputError for n < 2.
BandwidthChoice default_bandwidth(std::size_t n, std::size_t p, const EstimatorConfig& cfg);

/// f(x) = 1/(m h^p) sum_{j=1}^m prod_k v_h((x_k - Y_{j,k}) / h) over the
/// tensor grid spanned by `axes`. The table lattice is in units of
/// (x - Y)/h. Grid cells are evaluated in parallel; each cell accumulates
/// over j in sequential order, so results do not depend on thread count.
/// `workers` = 0 uses every hardware thread.
/// Throws InputError when m = 0 or the grid rank differs from p.
DensityGrid estimate_density(const ObservationSet& obs,
                             const DeconvTable& table,
                             std::vector<std::vector<double>> axes,
                             std::size_t workers = 0);

/// Table of v_h covering every (x - Y_i)/h with x on `axes` and Y_i in
/// obs, on a lattice no coarser than 80/4095.
DeconvTable table_for_observations(const ObservationSet& obs,
                                   const KernelSpec& kernel,
                                   double h,
                                   const std::vector<std::vector<double>>& axes);

/// Same estimator with the smoothing kernel w in place of v_h; applied to
/// exact log sigma^2 values this is E(f | sigma) for the noise-free
/// approximation.
DensityGrid kernel_smoother(const ObservationSet& obs,
                            const KernelSpec& kernel,
                            double h,
                            std::vector<std::vector<double>> axes,
                            std::size_t workers = 0);

} // namespace voldens
