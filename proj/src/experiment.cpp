#include "voldens/experiment.hpp"

#include "voldens/errors.hpp"
#include "voldens/parallel.hpp"
#include "voldens/rng.hpp"
#include "voldens/smoothing_kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace voldens {

namespace {

const std::set<std::string> kExperimentKeys{
  "model", "a",     "mu",     "b",        "a0",       "a1",     "mu0",
  "mu1",   "drift", "n",      "delta_exp", "gamma",   "times",  "grid",
  "reps",  "seed",  "substeps", "bandwidth", "kernel", "clamp_floor", "record_wall_time",
};

template<class T>
std::string
join(const std::vector<T>& v)
{
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out << ',';
    if constexpr (std::is_floating_point_v<T>)
      out << format_double(v[i]);
    else
      out << v[i];
  }
  return out.str();
}

std::ofstream
open_output(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot open " + path.string() + " for writing");
  return out;
}

void
close_output(std::ofstream& out, const std::filesystem::path& path)
{
  out.close();
  if (!out)
    throw Error("write failed for " + path.string());
}

double
center_value(const DensityGrid& grid, std::vector<double>* where)
{
  std::vector<std::size_t> idx;
  for (const auto& a : grid.axes())
    idx.push_back(a.size() / 2);
  if (where) {
    where->clear();
    for (std::size_t k = 0; k < idx.size(); ++k)
      where->push_back(grid.axis(k)[idx[k]]);
  }
  return grid.at(idx);
}

} // namespace

ModelSpec
default_model(ModelKind kind)
{
  ModelSpec m;
  m.kind = kind;
  m.ou = { 1.0, 0.0, 8.0 * std::numbers::sqrt2 };
  m.regime.a0 = 1.0;
  m.regime.a1 = 1.0;
  m.regime.ou0 = { 4.0, -2.0, 1.0 };
  m.regime.ou1 = { 4.0, 2.0, 1.0 };
  return m;
}

ModelSpec
model_from_config(const KeyValueConfig& cfg, ModelKind kind)
{
  ModelSpec m = default_model(kind);
  if (kind == ModelKind::ou) {
    m.ou.a = cfg.get_double("a", m.ou.a);
    m.ou.mu = cfg.get_double("mu", m.ou.mu);
    m.ou.b = cfg.get_double("b", m.ou.b);
  } else {
    m.regime.a0 = cfg.get_double("a0", m.regime.a0);
    m.regime.a1 = cfg.get_double("a1", m.regime.a1);
    const double a = cfg.get_double("a", m.regime.ou0.a);
    const double b = cfg.get_double("b", m.regime.ou0.b);
    m.regime.ou0 = { a, cfg.get_double("mu0", m.regime.ou0.mu), b };
    m.regime.ou1 = { a, cfg.get_double("mu1", m.regime.ou1.mu), b };
  }
  m.drift = cfg.get_double("drift", 0.0);
  m.validate();
  return m;
}

void
ExperimentConfig::validate() const
{
  model.validate();
  if (n_schedule.empty())
    throw ConfigError("experiment: empty n schedule");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 2)
      throw ConfigError("experiment: every n must be at least 2");
    if (i > 0 && n_schedule[i] <= n_schedule[i - 1])
      throw ConfigError("experiment: n schedule must be strictly increasing");
  }
  if (!(delta_exp > 0.0 && delta_exp < 1.0))
    throw ConfigError("experiment: delta_exp must lie in (0, 1)");
  if (!(gamma > 0.0))
    throw ConfigError("experiment: gamma must be positive");
  if (times.empty() || times.size() > 2)
    throw ConfigError("experiment: times must hold 1 or 2 target times");
  for (std::size_t k = 0; k < times.size(); ++k)
    if (!(times[k] > 0.0) || (k > 0 && !(times[k] > times[k - 1])))
      throw ConfigError("experiment: times must be positive and strictly increasing");
  if (reps < 1)
    throw ConfigError("experiment: reps must be at least 1");
  if (substeps < 10)
    throw ConfigError("experiment: substeps must be at least 10");
  if (bandwidth_override && !(*bandwidth_override > 0.0))
    throw ConfigError("experiment: bandwidth override must be positive");
  if (!(clamp_floor > 0.0))
    throw ConfigError("experiment: clamp_floor must be positive");
  builtin_kernel(kernel);
}

ExperimentConfig
ExperimentConfig::from_config(const KeyValueConfig& kv)
{
  kv.require_known(kExperimentKeys);
  ExperimentConfig cfg;
  cfg.model = model_from_config(kv, parse_model_kind(kv.get_string("model", "ou")));
  if (kv.has("n")) {
    cfg.n_schedule.clear();
    for (double n : kv.get_double_list("n", {})) {
      if (n < 0 || n != std::floor(n))
        throw ConfigError("experiment: n values must be nonnegative integers");
      cfg.n_schedule.push_back(static_cast<std::size_t>(n));
    }
  }
  cfg.delta_exp = kv.get_double("delta_exp", cfg.delta_exp);
  cfg.times = kv.get_double_list("times", cfg.times);
  cfg.gamma = kv.get_double("gamma", cfg.dimension() == 1 ? 9.0 : 17.0);
  if (const auto g = kv.raw("grid"); g && *g != "auto") {
    try {
      cfg.grid = AxisSpec::parse(*g);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  cfg.reps = kv.get_uint("reps", cfg.reps);
  cfg.master_seed = kv.get_uint("seed", cfg.master_seed);
  cfg.substeps = kv.get_uint("substeps", cfg.substeps);
  cfg.bandwidth_override = kv.get_optional_double("bandwidth");
  cfg.kernel = kv.get_string("kernel", cfg.kernel);
  cfg.clamp_floor = kv.get_double("clamp_floor", cfg.clamp_floor);
  cfg.record_wall_time = kv.get_bool("record_wall_time", cfg.record_wall_time);
  cfg.validate();
  return cfg;
}

ExperimentConfig
ExperimentConfig::load(const std::filesystem::path& path)
{
  return from_config(KeyValueConfig::load(path));
}

std::string
ExperimentConfig::echo() const
{
  std::ostringstream out;
  out << "model = " << to_string(model.kind) << '\n';
  if (model.kind == ModelKind::ou) {
    out << "a = " << format_double(model.ou.a) << '\n';
    out << "mu = " << format_double(model.ou.mu) << '\n';
    out << "b = " << format_double(model.ou.b) << '\n';
  } else {
    out << "a0 = " << format_double(model.regime.a0) << '\n';
    out << "a1 = " << format_double(model.regime.a1) << '\n';
    out << "a = " << format_double(model.regime.ou0.a) << '\n';
    out << "b = " << format_double(model.regime.ou0.b) << '\n';
    out << "mu0 = " << format_double(model.regime.ou0.mu) << '\n';
    out << "mu1 = " << format_double(model.regime.ou1.mu) << '\n';
  }
  out << "drift = " << format_double(model.drift) << '\n';
  out << "n = " << join(n_schedule) << '\n';
  out << "delta_exp = " << format_double(delta_exp) << '\n';
  out << "gamma = " << format_double(gamma) << '\n';
  out << "times = " << join(times) << '\n';
  out << "grid = " << (grid ? grid->to_string() : std::string("auto")) << '\n';
  out << "reps = " << reps << '\n';
  out << "seed = " << master_seed << '\n';
  out << "substeps = " << substeps << '\n';
  out << "bandwidth = " << (bandwidth_override ? format_double(*bandwidth_override) : "none") << '\n';
  out << "kernel = " << kernel << '\n';
  out << "clamp_floor = " << format_double(clamp_floor) << '\n';
  out << "record_wall_time = " << (record_wall_time ? 1 : 0) << '\n';
  return out.str();
}

std::vector<std::vector<double>>
experiment_axes(const ExperimentConfig& cfg)
{
  AxisSpec axis;
  if (cfg.grid) {
    axis = *cfg.grid;
  } else {
    const auto [mean, sd] = log_variance_moments(cfg.model);
    axis = { mean - 5.0 * sd, mean + 5.0 * sd, cfg.dimension() == 1 ? 201u : 61u };
  }
  return std::vector<std::vector<double>>(cfg.dimension(), axis.points());
}

DeconvTable
experiment_table(const ExperimentConfig& cfg, double h)
{
  const auto axes = experiment_axes(cfg);
  const auto [mean, sd] = log_variance_moments(cfg.model);
  const double lo = axes[0].front();
  const double hi = axes[0].back();
  // log Z^2 lies in [-25, 3] outside of probability ~1e-5; rarer values fall
  // back to direct quadrature.
  const double u_min = (lo - (mean + 6.0 * sd + 3.0)) / h;
  const double u_max = (hi - (mean - 6.0 * sd - 25.0)) / h;
  constexpr double kSpacing = 80.0 / 4095.0;
  const auto points = std::max<std::size_t>(
    4096, static_cast<std::size_t>(std::ceil((u_max - u_min) / kSpacing)) + 1);
  return DeconvTable::build(builtin_kernel(cfg.kernel), h, u_min, u_max, points);
}

double
compute_mise(const DensityGrid& est, const TruthDensity& truth)
{
  if (est.dimension() != truth.dimension)
    throw InputError("compute_mise: grid dimension does not match truth");
  const auto w = est.trapezoid_weights();
  const auto values = est.values();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto x = est.point(i);
    const double d = values[i] - truth(x);
    s += w[i] * d * d;
  }
  return s;
}

double
compute_mise(const DensityGrid& est, const DensityGrid& reference)
{
  if (est.axes() != reference.axes())
    throw InputError("compute_mise: grids are not on the same lattice");
  const auto w = est.trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = est.values()[i] - reference.values()[i];
    s += w[i] * d * d;
  }
  return s;
}

MonteCarloReport
run_experiment(const ExperimentConfig& cfg)
{
  cfg.validate();
  MonteCarloReport report;
  report.config = cfg;
  const std::size_t p = cfg.dimension();
  const auto axes = experiment_axes(cfg);
  const TruthDensity truth = truth_for_model(cfg.model, cfg.times);
  const std::size_t reps = cfg.reps;

  for (std::size_t ni = 0; ni < cfg.n_schedule.size(); ++ni) {
    const std::size_t n = cfg.n_schedule[ni];
    const EstimatorConfig est_cfg{ cfg.gamma, cfg.delta_exp, cfg.bandwidth_override };
    const BandwidthChoice bw = default_bandwidth(n, p, est_cfg);
    if (bw.warning)
      report.warnings.push_back("n = " + std::to_string(n) + ": " + *bw.warning);

    ScheduleRow row{};
    row.n = n;
    row.h = bw.h;
    row.delta = bw.delta;
    row.gamma_threshold = bw.gamma_threshold;
    row.condition_met = bw.condition_met;
    {
      DensityGrid truth_grid(axes);
      auto tv = truth_grid.values();
      for (std::size_t i = 0; i < tv.size(); ++i)
        tv[i] = truth(truth_grid.point(i));
      row.truth_mass_on_grid = truth_grid.integral();
    }

    std::optional<DeconvTable> table;
    try {
      table = experiment_table(cfg, bw.h);
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " (n = " + std::to_string(n) + ")");
    }

    std::vector<RunRecord> records(reps);
    std::vector<DensityGrid> grids(reps);
    std::vector<std::size_t> counts(reps);
    parallel_for(reps, [&](std::size_t rep) {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t seed = replication_seed(cfg.master_seed, ni, rep);
      try {
        const PathBundle path = simulate_path(cfg.model, n, bw.delta, cfg.substeps, seed);
        LogSquareResult ls = log_square_transform(path.increments, cfg.clamp_floor);
        const ObservationSet obs = make_observation_set(std::move(ls.values), bw.delta, cfg.times);
        counts[rep] = obs.effective_count();
        DensityGrid grid = estimate_density(obs, *table, axes, 1);
        RunRecord& r = records[rep];
        r.n = n;
        r.rep = rep;
        r.seed = seed;
        r.mise = compute_mise(grid, truth);
        std::vector<double> centre;
        const double fc = center_value(grid, &centre);
        r.bias_center = fc - truth(centre);
        r.clamps = ls.clamped;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        r.seconds = cfg.record_wall_time ? elapsed.count() : 0.0;
        grids[rep] = std::move(grid);
      } catch (const std::exception& e) {
        throw Error(std::string(e.what()) + " (n = " + std::to_string(n) + ", rep = " +
                    std::to_string(rep) + ")");
      }
    });

    row.m = counts.front();
    double sum = 0.0, sum_b = 0.0;
    for (const auto& r : records) {
      sum += r.mise;
      sum_b += r.bias_center;
    }
    const double mean = sum / static_cast<double>(reps);
    const double mean_b = sum_b / static_cast<double>(reps);
    double ss = 0.0, ss_b = 0.0;
    for (const auto& r : records) {
      ss += (r.mise - mean) * (r.mise - mean);
      ss_b += (r.bias_center - mean_b) * (r.bias_center - mean_b);
    }
    const double denom = reps > 1 ? static_cast<double>(reps - 1) : 1.0;
    report.aggregate.push_back({ n, mean, reps > 1 ? std::sqrt(ss / denom / static_cast<double>(reps)) : 0.0 });
    row.bias_center_mean = mean_b;
    row.bias_center_var = reps > 1 ? ss_b / denom : 0.0;
    report.schedule.push_back(row);
    for (std::size_t rep = 0; rep < reps; ++rep) {
      report.records.push_back(records[rep]);
      report.grids.push_back(std::move(grids[rep]));
    }
  }
  return report;
}

double
predicted_bias(const TruthDensity& truth, std::span<const double> x, double h, double mu2)
{
  constexpr double kStep = 1e-4;
  std::vector<double> y(x.begin(), x.end());
  const double f0 = truth(y);
  double trace = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = x[k] + kStep;
    const double fp = truth(y);
    y[k] = x[k] - kStep;
    const double fm = truth(y);
    y[k] = x[k];
    trace += (fp - 2.0 * f0 + fm) / (kStep * kStep);
  }
  return 0.5 * h * h * mu2 * trace;
}

BiasReport
bias_check(const ExperimentConfig& cfg,
           const TruthDensity& truth,
           const std::vector<std::vector<double>>& points,
           const std::vector<double>& bandwidth_scales)
{
  cfg.validate();
  const std::size_t p = cfg.dimension();
  if (truth.dimension != p)
    throw InputError("bias_check: truth dimension does not match the configured times");
  for (const auto& pt : points)
    if (pt.size() != p)
      throw InputError("bias_check: evaluation point of wrong dimension");

  const std::size_t ni = cfg.n_schedule.size() - 1;
  const std::size_t n = cfg.n_schedule.back();
  const EstimatorConfig est_cfg{ cfg.gamma, cfg.delta_exp, cfg.bandwidth_override };
  const BandwidthChoice bw = default_bandwidth(n, p, est_cfg);
  const KernelSpec kernel = builtin_kernel(cfg.kernel);
  const double mu2 = kernel_moments(kernel).mu2;

  std::vector<DeconvTable> tables;
  for (double scale : bandwidth_scales)
    tables.push_back(experiment_table(cfg, bw.h * scale));

  const std::size_t ns = bandwidth_scales.size();
  const std::size_t np = points.size();
  // estimates[rep][scale][point]
  std::vector<double> estimates(cfg.reps * ns * np);
  parallel_for(cfg.reps, [&](std::size_t rep) {
    const std::uint64_t seed = replication_seed(cfg.master_seed, ni, rep);
    const PathBundle path = simulate_path(cfg.model, n, bw.delta, cfg.substeps, seed);
    LogSquareResult ls = log_square_transform(path.increments, cfg.clamp_floor);
    const ObservationSet obs = make_observation_set(std::move(ls.values), bw.delta, cfg.times);
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t q = 0; q < np; ++q) {
        std::vector<std::vector<double>> axes;
        for (double c : points[q])
          axes.push_back({ c });
        estimates[(rep * ns + s) * np + q] = estimate_density(obs, tables[s], axes, 1).values()[0];
      }
  });

  BiasReport report{ n, cfg.reps, mu2, {} };
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t q = 0; q < np; ++q) {
      BiasRow row;
      row.scale = bandwidth_scales[s];
      row.h = bw.h * row.scale;
      row.point = points[q];
      row.truth = truth(points[q]);
      double sum = 0.0;
      for (std::size_t rep = 0; rep < cfg.reps; ++rep)
        sum += estimates[(rep * ns + s) * np + q];
      row.mean_estimate = sum / static_cast<double>(cfg.reps);
      double ss = 0.0;
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        const double d = estimates[(rep * ns + s) * np + q] - row.mean_estimate;
        ss += d * d;
      }
      row.bias = row.mean_estimate - row.truth;
      row.bias_se = cfg.reps > 1 ? std::sqrt(ss / static_cast<double>(cfg.reps - 1) / static_cast<double>(cfg.reps)) : 0.0;
      row.predicted = predicted_bias(truth, points[q], row.h, mu2);
      row.ratio = row.bias / row.predicted;
      report.rows.push_back(std::move(row));
    }
  return report;
}

void
emit_report(const MonteCarloReport& report, const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir / "grids", ec);
  if (ec)
    throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  {
    const auto path = dir / "records.csv";
    auto out = open_output(path);
    out << "n,rep,mise,bias_center,clamps,seconds\n";
    for (const auto& r : report.records)
      out << r.n << ',' << r.rep << ',' << format_double(r.mise) << ','
          << format_double(r.bias_center) << ',' << r.clamps << ',' << format_double(r.seconds) << '\n';
    close_output(out, path);
  }
  {
    const auto path = dir / "aggregate.csv";
    auto out = open_output(path);
    out << "n,mise_mean,mise_se\n";
    for (const auto& a : report.aggregate)
      out << a.n << ',' << format_double(a.mise_mean) << ',' << format_double(a.mise_se) << '\n';
    close_output(out, path);
  }
  {
    const auto path = dir / "schedule.csv";
    auto out = open_output(path);
    out << "n,h,delta,m,gamma_threshold,condition_met,truth_mass_on_grid,bias_center_mean,bias_center_var\n";
    for (const auto& s : report.schedule)
      out << s.n << ',' << format_double(s.h) << ',' << format_double(s.delta) << ',' << s.m << ','
          << format_double(s.gamma_threshold) << ',' << (s.condition_met ? 1 : 0) << ','
          << format_double(s.truth_mass_on_grid) << ',' << format_double(s.bias_center_mean) << ','
          << format_double(s.bias_center_var) << '\n';
    close_output(out, path);
  }
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const auto path =
      dir / "grids" / ("n" + std::to_string(r.n) + "_rep" + std::to_string(r.rep) + ".csv");
    auto out = open_output(path);
    write_density_csv(report.grids[i], out);
    close_output(out, path);
  }
  {
    const auto path = dir / "config.echo";
    auto out = open_output(path);
    out << report.config.echo();
    close_output(out, path);
  }
  const auto warn_path = dir / "warnings.txt";
  if (!report.warnings.empty()) {
    auto out = open_output(warn_path);
    for (const auto& w : report.warnings)
      out << w << '\n';
    close_output(out, warn_path);
  } else {
    std::filesystem::remove(warn_path, ec);
  }
}

} // namespace voldens
