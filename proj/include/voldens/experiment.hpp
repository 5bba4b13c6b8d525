#pragma once

#include "voldens/analytic_truth.hpp"
#include "voldens/config.hpp"
#include "voldens/density_grid.hpp"
#include "voldens/estimator.hpp"
#include "voldens/vol_sim.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace voldens {

/// Model parameters from flat config keys. OU model: a, mu, b (OU of
/// log sigma^2). Regime model: a0, a1 (intensities), a, b (shared by both
/// components), mu0, mu1 (component levels of xi = log sigma). Optional
/// constant `drift`.
ModelSpec model_from_config(const KeyValueConfig& cfg, ModelKind kind);

/// Defaults: OU with a = 1, mu = 0, b = 8 sqrt 2 (stationary sd 8);
/// regime with a0 = a1 = 1, a = 4, b = 1, mu0 = -2, mu1 = 2.
ModelSpec default_model(ModelKind kind);

struct ExperimentConfig
{
  ModelSpec model;
  std::vector<std::size_t> n_schedule{ 1000, 10000, 100000 };
  double delta_exp = 0.5;
  double gamma = 9.0;
  std::vector<double> times{ 1.0 };
  std::optional<AxisSpec> grid; ///< shared by every axis; default mean +- 5 sd
  std::size_t reps = 20;
  std::uint64_t master_seed = 20240601;
  std::size_t substeps = kDefaultSubsteps;
  std::optional<double> bandwidth_override;
  std::string kernel = "poly3";
  double clamp_floor = kDefaultClampFloor;
  bool record_wall_time = false; ///< wall time is the only nondeterministic column

  std::size_t dimension() const noexcept { return times.size(); }

  /// Throws ConfigError on an invalid configuration.
  void validate() const;

  static ExperimentConfig from_config(const KeyValueConfig& kv);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Complete key = value text; from_config(parse(echo())) reproduces *this.
  std::string echo() const;
};

struct RunRecord
{
  std::size_t n;
  std::size_t rep;
  std::uint64_t seed;
  double mise;
  double bias_center;
  std::size_t clamps;
  double seconds;
};

struct AggregateRow
{
  std::size_t n;
  double mise_mean;
  double mise_se;
};

/// Per-n quantities shared by all replications.
struct ScheduleRow
{
  std::size_t n;
  double h;
  double delta;
  std::size_t m;
  double gamma_threshold;
  bool condition_met;
  double truth_mass_on_grid;
  double bias_center_mean;
  double bias_center_var;
};

struct MonteCarloReport
{
  ExperimentConfig config;
  std::vector<RunRecord> records;     ///< sorted by (n, rep)
  std::vector<DensityGrid> grids;     ///< parallel to records
  std::vector<AggregateRow> aggregate;
  std::vector<ScheduleRow> schedule;
  std::vector<std::string> warnings;
};

/// For each n and replication: simulate with delta = n^{-delta_exp},
/// estimate with h = gamma pi / log n (or the override), score against the
/// truth. Replications run in parallel; aggregation is a sequential reduce
/// over (n, rep). Stage errors are rethrown with (n, rep) context.
MonteCarloReport run_experiment(const ExperimentConfig& cfg);

/// Trapezoid-weighted sum of (estimate - truth)^2 over the grid.
double compute_mise(const DensityGrid& est, const TruthDensity& truth);
double compute_mise(const DensityGrid& est, const DensityGrid& reference);

/// Evaluation lattice of the experiment: cfg.grid, or the stationary mean
/// +- 5 sd with 201 (p = 1) or 61 (p >= 2) points per axis.
std::vector<std::vector<double>> experiment_axes(const ExperimentConfig& cfg);

/// Table with lattice in (x - Y)/h units wide enough for every grid point
/// against log sigma^2 within +-6 sd plus the bulk of the noise.
DeconvTable experiment_table(const ExperimentConfig& cfg, double h);

struct BiasRow
{
  double scale;        ///< bandwidth multiplier
  double h;
  std::vector<double> point;
  double truth;
  double mean_estimate;
  double bias;
  double bias_se;
  double predicted;    ///< (h^2 mu2 / 2) tr Hess f
  double ratio;        ///< bias / predicted
};

struct BiasReport
{
  std::size_t n;
  std::size_t reps;
  double mu2;
  std::vector<BiasRow> rows;
};

/// Averages R replications at n = last entry of the schedule, for each
/// bandwidth multiplier on the same simulated paths, and compares the
/// empirical bias with the leading h^2 term (Hessian by central
/// differences, step 1e-4).
BiasReport bias_check(const ExperimentConfig& cfg,
                      const TruthDensity& truth,
                      const std::vector<std::vector<double>>& points,
                      const std::vector<double>& bandwidth_scales = { 1.0 });

/// (h^2 mu2 / 2) * trace of the central-difference Hessian of f at x.
double predicted_bias(const TruthDensity& truth, std::span<const double> x, double h, double mu2);

/// Writes records.csv, aggregate.csv, schedule.csv, grids/*.csv and
/// config.echo (plus warnings.txt when any). Throws Error with the path on
/// I/O failure.
void emit_report(const MonteCarloReport& report, const std::filesystem::path& dir);

} // namespace voldens
