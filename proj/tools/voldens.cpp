// voldens: deconvolution density estimation of log-volatility from
// discretely sampled prices.

#include "voldens/analytic_truth.hpp"
#include "voldens/config.hpp"
#include "voldens/deconv_kernel.hpp"
#include "voldens/density_grid.hpp"
#include "voldens/errors.hpp"
#include "voldens/estimator.hpp"
#include "voldens/experiment.hpp"
#include "voldens/smoothing_kernel.hpp"
#include "voldens/vol_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace {

using namespace voldens;

const std::set<std::string> kParamKeys{ "a", "mu", "b", "a0", "a1", "mu0", "mu1", "drift", "delta_exp", "gamma" };

class Output
{
public:
  explicit Output(const std::string& path)
    : path_(path)
  {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_)
        throw Error("cannot open " + path + " for writing");
    }
  }

  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  void close()
  {
    if (file_.is_open()) {
      file_.close();
      if (!file_)
        throw Error("write failed for " + path_);
    } else {
      std::cout.flush();
    }
  }

private:
  std::string path_;
  std::ofstream file_;
};

std::vector<double>
read_increments(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open increments file " + path);
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v))
      throw InputError(path + ":" + std::to_string(line_no) + ": not a finite number: '" + token + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw InputError(path + ": no increments");
  return out;
}

std::vector<double>
parse_times(const std::string& text)
{
  try {
    return parse_double_list(text);
  } catch (const ConfigError& e) {
    throw InputError(std::string("--times: ") + e.what());
  }
}

ModelSpec
load_model(const std::string& model_name, const std::string& params_path)
{
  const ModelKind kind = parse_model_kind(model_name);
  if (params_path.empty())
    return default_model(kind);
  const KeyValueConfig cfg = KeyValueConfig::load(params_path);
  cfg.require_known(kParamKeys);
  return model_from_config(cfg, kind);
}

int
run_kernel_table(const std::string& kernel_name,
                 const std::string& grid_text,
                 bool deconv,
                 std::optional<double> h,
                 const std::string& out_path)
{
  const KernelSpec kernel = builtin_kernel(kernel_name);
  const auto x = AxisSpec::parse(grid_text).points();
  Output out(out_path);
  auto& os = out.stream();
  if (deconv) {
    if (!h)
      throw InputError("kernel-table --deconv requires -h <bandwidth>");
    const DeconvKernel v(kernel, *h);
    os << "# h=" << format_double(*h) << " kernel=" << kernel.name()
       << " gamma0=" << format_double(v.gamma0()) << '\n';
    os << "x,v_h\n";
    for (double xi : x)
      os << format_double(xi) << ',' << format_double(v(xi)) << '\n';
  } else {
    os << "x,w,phi_w\n";
    for (double xi : x)
      os << format_double(xi) << ',' << format_double(eval_w(kernel, xi)) << ','
         << format_double(kernel.phi_w(xi)) << '\n';
  }
  out.close();
  return 0;
}

int
run_simulate(const std::string& model_name,
             const std::string& params_path,
             std::size_t n,
             std::optional<double> delta_arg,
             std::uint64_t seed,
             std::size_t substeps,
             const std::string& out_path)
{
  const ModelSpec model = load_model(model_name, params_path);
  double delta_exp = 0.5;
  if (!params_path.empty())
    delta_exp = KeyValueConfig::load(params_path).get_double("delta_exp", delta_exp);
  const double delta = delta_arg ? *delta_arg : std::pow(static_cast<double>(n), -delta_exp);
  if (!(delta > 0.0))
    throw InputError("--delta must be positive");
  const PathBundle path = simulate_path(model, n, delta, substeps, seed);

  Output out(out_path);
  for (double x : path.increments)
    out.stream() << format_double(x) << '\n';
  out.close();

  std::vector<double> block_log(n);
  for (std::size_t i = 1; i <= n; ++i)
    block_log[i - 1] = std::log(path.sigma2_at_block_start(i));
  const double mean = std::accumulate(block_log.begin(), block_log.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : block_log)
    ss += (v - mean) * (v - mean);
  const auto [lo, hi] = std::minmax_element(path.sigma2.begin(), path.sigma2.end());

  nlohmann::ordered_json side;
  side["model"] = to_string(model.kind);
  if (model.kind == ModelKind::ou) {
    side["params"] = { { "a", model.ou.a }, { "mu", model.ou.mu }, { "b", model.ou.b } };
  } else {
    side["params"] = { { "a0", model.regime.a0 }, { "a1", model.regime.a1 },
                       { "a", model.regime.ou0.a }, { "b", model.regime.ou0.b },
                       { "mu0", model.regime.ou0.mu }, { "mu1", model.regime.ou1.mu } };
  }
  side["params"]["drift"] = model.drift;
  side["n"] = n;
  side["delta"] = delta;
  side["substeps"] = substeps;
  side["seed"] = seed;
  side["sigma2_path"] = { { "points", path.sigma2.size() },
                          { "fine_dt", path.fine_dt },
                          { "min", *lo },
                          { "max", *hi },
                          { "log_sigma2_block_mean", mean },
                          { "log_sigma2_block_sd", n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0 } };
  const auto [mu_ls, sd_ls] = log_variance_moments(model);
  side["stationary_log_sigma2"] = { { "mean", mu_ls }, { "sd", sd_ls } };

  if (!out_path.empty() && out_path != "-") {
    Output js(out_path + ".json");
    js.stream() << side.dump(2) << '\n';
    js.close();
  }
  return 0;
}

std::vector<std::vector<double>>
grid_axes(const std::string& grid_text, std::size_t p)
{
  return std::vector<std::vector<double>>(p, AxisSpec::parse(grid_text).points());
}

int
run_estimate(const std::string& input,
             double delta,
             const std::string& times_text,
             std::optional<double> gamma,
             const std::string& grid_text,
             std::optional<double> bandwidth,
             const std::string& kernel_name,
             const std::string& out_path)
{
  const auto increments = read_increments(input);
  const auto times = parse_times(times_text);
  const std::size_t n = increments.size();
  if (n < 2)
    throw InputError("need at least two increments");
  if (!(delta > 0.0 && delta < 1.0))
    throw InputError("--delta must lie in (0, 1)");
  EstimatorConfig cfg;
  cfg.gamma = gamma ? *gamma : (times.size() == 1 ? 9.0 : 17.0);
  // the sampling gap fixes the exponent in delta = n^{-delta_exp}
  cfg.delta_exp = -std::log(delta) / std::log(static_cast<double>(n));
  cfg.bandwidth_override = bandwidth;
  const BandwidthChoice bw = default_bandwidth(n, times.size(), cfg);
  if (bw.warning)
    std::cerr << "warning: " << *bw.warning << '\n';

  auto ls = log_square_transform(increments);
  if (ls.clamped > 0)
    std::cerr << "note: " << ls.clamped << " increments clamped before the log transform\n";
  const ObservationSet obs = make_observation_set(std::move(ls.values), delta, times);
  const auto axes = grid_axes(grid_text, times.size());
  const KernelSpec kernel = builtin_kernel(kernel_name);
  const DeconvTable table = table_for_observations(obs, kernel, bw.h, axes);
  const DensityGrid grid = estimate_density(obs, table, axes);

  Output out(out_path);
  write_density_csv(grid, out.stream());
  out.close();
  return 0;
}

int
run_truth(const std::string& model_name,
          const std::string& params_path,
          const std::string& times_text,
          const std::string& grid_text,
          const std::string& out_path)
{
  const ModelSpec model = load_model(model_name, params_path);
  const auto times = parse_times(times_text);
  const TruthDensity truth = truth_for_model(model, times);
  DensityGrid grid(grid_axes(grid_text, times.size()));
  auto values = grid.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = truth(grid.point(i));
  Output out(out_path);
  write_density_csv(grid, out.stream());
  out.close();
  return 0;
}

int
run_experiment_cmd(const std::string& config_path, const std::string& out_dir)
{
  const ExperimentConfig cfg = ExperimentConfig::load(config_path);
  const MonteCarloReport report = run_experiment(cfg);
  emit_report(report, out_dir);
  for (const auto& w : report.warnings)
    std::cerr << "warning: " << w << '\n';
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Deconvolution density estimation for stochastic volatility" };
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::string kernel_name = "poly3";
  std::string grid_text;
  std::string out_path;

  auto* kt = app.add_subcommand("kernel-table", "Tabulate w and phi_w, or v_h with --deconv");
  kt->set_help_flag("--help");
  bool deconv = false;
  std::optional<double> h;
  kt->add_option("--kernel", kernel_name, "Smoothing kernel")->capture_default_str();
  kt->add_option("--grid", grid_text, "Abscissae lo:hi:n")->default_val("-20:20:401");
  kt->add_flag("--deconv", deconv, "Emit the deconvolution kernel v_h");
  kt->add_option("-h,--bandwidth", h, "Bandwidth for --deconv");
  kt->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Simulate normalized price increments");
  sim->set_help_flag("--help");
  std::string model_name = "ou";
  std::string params_path;
  std::size_t n = 0;
  std::optional<double> delta;
  std::uint64_t seed = 1;
  std::size_t substeps = kDefaultSubsteps;
  sim->add_option("--model", model_name, "ou or regime")->check(CLI::IsMember({ "ou", "regime" }));
  sim->add_option("--params", params_path, "Parameter file (key = value)");
  sim->add_option("--n", n, "Number of increments")->required()->check(CLI::PositiveNumber);
  sim->add_option("--delta", delta, "Sampling gap (default n^-delta_exp)");
  sim->add_option("--seed", seed, "Master seed")->capture_default_str();
  sim->add_option("--substeps", substeps, "Fine steps per sampling interval")->capture_default_str();
  sim->add_option("--out", out_path, "Increments file; a .json sidecar is written next to it")->required();

  auto* est = app.add_subcommand("estimate", "Estimate the density of log sigma^2 at the given times");
  est->set_help_flag("--help");
  std::string input;
  double est_delta = 0.0;
  std::string times_text;
  std::optional<double> gamma;
  std::optional<double> bandwidth;
  est->add_option("--input", input, "Increments, one per line")->required();
  est->add_option("--delta", est_delta, "Sampling gap")->required();
  est->add_option("--times", times_text, "Target times t1[,t2,...]")->required();
  est->add_option("--gamma", gamma, "Bandwidth constant (default 9, or 17 for p >= 2)");
  est->add_option("--grid", grid_text, "Evaluation axis lo:hi:n")->required();
  est->add_option("--bandwidth", bandwidth, "Override h");
  est->add_option("--kernel", kernel_name, "Smoothing kernel")->capture_default_str();
  est->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* tr = app.add_subcommand("truth", "Closed-form density of log sigma^2");
  tr->set_help_flag("--help");
  tr->add_option("--model", model_name, "ou or regime")->required()->check(CLI::IsMember({ "ou", "regime" }));
  tr->add_option("--params", params_path, "Parameter file (key = value)");
  tr->add_option("--times", times_text, "t1[,t2]")->required();
  tr->add_option("--grid", grid_text, "Evaluation axis lo:hi:n")->required();
  tr->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* ex = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  ex->set_help_flag("--help");
  std::string config_path;
  std::string out_dir;
  ex->add_option("--config", config_path, "Experiment config (key = value)")->required();
  ex->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*kt)
      return run_kernel_table(kernel_name, grid_text, deconv, h, out_path);
    if (*sim)
      return run_simulate(model_name, params_path, n, delta, seed, substeps, out_path);
    if (*est)
      return run_estimate(input, est_delta, times_text, gamma, grid_text, bandwidth, kernel_name, out_path);
    if (*tr)
      return run_truth(model_name, params_path, times_text, grid_text, out_path);
    if (*ex)
      return run_experiment_cmd(config_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "voldens: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
