#include "voldens/analytic_truth.hpp"
#include "voldens/config.hpp"
#include "voldens/deconv_kernel.hpp"
#include "voldens/errors.hpp"
#include "voldens/estimator.hpp"
#include "voldens/experiment.hpp"
#include "voldens/noise_model.hpp"
#include "voldens/smoothing_kernel.hpp"
#include "voldens/vol_sim.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace voldens;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double>
to_vector(const Array& a)
{
  std::vector<double> v(static_cast<std::size_t>(a.size()));
  const double* p = a.data();
  std::copy(p, p + a.size(), v.begin());
  return v;
}

Array
to_array(const std::vector<double>& v)
{
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array
grid_values(const DensityGrid& g)
{
  std::vector<py::ssize_t> shape;
  for (auto s : g.shape())
    shape.push_back(static_cast<py::ssize_t>(s));
  Array out(shape);
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

ModelSpec
model_from(const std::string& kind, const std::map<std::string, double>& params)
{
  std::ostringstream text;
  for (const auto& [k, v] : params)
    text << k << " = " << format_double(v) << '\n';
  std::istringstream in(text.str());
  const auto cfg = KeyValueConfig::parse(in, "params");
  cfg.require_known({ "a", "mu", "b", "a0", "a1", "mu0", "mu1", "drift" });
  return model_from_config(cfg, parse_model_kind(kind));
}

std::vector<std::vector<double>>
axes_for(const std::string& grid, std::size_t p)
{
  return std::vector<std::vector<double>>(p, AxisSpec::parse(grid).points());
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Deconvolution density estimation for stochastic volatility";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());

  m.def("kernel_names", &builtin_kernel_names);
  m.def("phi_w", [](const std::string& kernel, double s) { return builtin_kernel(kernel).phi_w(s); },
        py::arg("kernel"), py::arg("s"));
  m.def("eval_w", [](const std::string& kernel, const Array& x) {
    const KernelSpec k = builtin_kernel(kernel);
    auto v = to_vector(x);
    for (auto& e : v)
      e = eval_w(k, e);
    return to_array(v);
  }, py::arg("kernel"), py::arg("x"));
  m.def("kernel_moments", [](const std::string& kernel) {
    const auto mo = kernel_moments(builtin_kernel(kernel));
    return py::dict(py::arg("m0") = mo.m0, py::arg("mu2") = mo.mu2, py::arg("m2_abs") = mo.m2_abs);
  }, py::arg("kernel") = "poly3");

  m.def("phi_k", &phi_k, py::arg("t"));
  m.def("noise_density", py::vectorize(&noise_density), py::arg("x"));
  m.def("noise_cdf", py::vectorize(&noise_cdf), py::arg("x"));
  m.def("sample_noise", [](std::size_t n, std::uint64_t seed) { return to_array(sample_noise(n, seed)); },
        py::arg("n"), py::arg("seed"));

  py::class_<DeconvKernel>(m, "DeconvKernel")
    .def(py::init([](const std::string& kernel, double h) { return DeconvKernel(builtin_kernel(kernel), h); }),
         py::arg("kernel"), py::arg("h"))
    .def_property_readonly("h", &DeconvKernel::bandwidth)
    .def_property_readonly("gamma0", &DeconvKernel::gamma0)
    .def("__call__", [](const DeconvKernel& v, const Array& x) {
      auto out = to_vector(x);
      for (auto& e : out)
        e = v(e);
      return to_array(out);
    }, py::arg("x"));
  m.def("gamma0", [](const std::string& kernel, double h) { return gamma0(builtin_kernel(kernel), h); },
        py::arg("kernel"), py::arg("h"));
  m.def("gamma1", &gamma1, py::arg("h"), py::arg("x"));

  m.def("bandwidth", [](std::size_t n, std::size_t p, double gamma, double delta_exp) {
    const auto b = default_bandwidth(n, p, { gamma, delta_exp, std::nullopt });
    return py::dict(py::arg("h") = b.h, py::arg("delta") = b.delta, py::arg("condition_met") = b.condition_met);
  }, py::arg("n"), py::arg("p") = 1, py::arg("gamma") = 9.0, py::arg("delta_exp") = 0.5);

  m.def("simulate", [](const std::string& model, const std::map<std::string, double>& params, std::size_t n,
                       double delta, std::uint64_t seed, std::size_t substeps) {
    const PathBundle b = simulate_path(model_from(model, params), n, delta, substeps, seed);
    return py::dict(py::arg("increments") = to_array(b.increments), py::arg("sigma2") = to_array(b.sigma2),
                    py::arg("fine_dt") = b.fine_dt);
  }, py::arg("model") = "ou", py::arg("params") = std::map<std::string, double>{}, py::arg("n"),
     py::arg("delta"), py::arg("seed"), py::arg("substeps") = kDefaultSubsteps,
     "Normalized increments and the sigma^2 path on the fine grid.");

  m.def("estimate", [](const Array& increments, double delta, std::vector<double> times, const std::string& grid,
                       std::optional<double> gamma, std::optional<double> bandwidth, const std::string& kernel) {
    const auto x = to_vector(increments);
    EstimatorConfig cfg;
    cfg.gamma = gamma ? *gamma : (times.size() == 1 ? 9.0 : 17.0);
    cfg.delta_exp = -std::log(delta) / std::log(static_cast<double>(x.size()));
    cfg.bandwidth_override = bandwidth;
    const auto bw = default_bandwidth(x.size(), times.size(), cfg);
    const auto obs = make_observation_set(log_square_transform(x).values, delta, std::move(times));
    const auto axes = axes_for(grid, obs.dimension());
    const auto table = table_for_observations(obs, builtin_kernel(kernel), bw.h, axes);
    const auto g = estimate_density(obs, table, axes);
    return py::make_tuple(to_array(axes[0]), grid_values(g), bw.h);
  }, py::arg("increments"), py::arg("delta"), py::arg("times"), py::arg("grid"), py::arg("gamma") = py::none(),
     py::arg("bandwidth") = py::none(), py::arg("kernel") = "poly3",
     "Returns (axis, values, h); values has one axis per target time.");

  m.def("truth", [](const std::string& model, const std::map<std::string, double>& params,
                    std::vector<double> times, const std::string& grid) {
    const auto t = truth_for_model(model_from(model, params), times);
    DensityGrid g(axes_for(grid, times.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
      g.values()[i] = t(g.point(i));
    return py::make_tuple(to_array(g.axis(0)), grid_values(g));
  }, py::arg("model"), py::arg("params") = std::map<std::string, double>{}, py::arg("times"), py::arg("grid"));

  m.def("run_experiment", [](const std::string& config_text, std::optional<std::filesystem::path> out) {
    std::istringstream in(config_text);
    const auto cfg = ExperimentConfig::from_config(KeyValueConfig::parse(in, "config"));
    MonteCarloReport report;
    {
      py::gil_scoped_release release;
      report = run_experiment(cfg);
      if (out)
        emit_report(report, *out);
    }
    py::list aggregate;
    for (const auto& a : report.aggregate)
      aggregate.append(py::dict(py::arg("n") = a.n, py::arg("mise_mean") = a.mise_mean,
                                py::arg("mise_se") = a.mise_se));
    py::list records;
    for (const auto& r : report.records)
      records.append(py::dict(py::arg("n") = r.n, py::arg("rep") = r.rep, py::arg("mise") = r.mise,
                              py::arg("bias_center") = r.bias_center));
    return py::dict(py::arg("aggregate") = aggregate, py::arg("records") = records,
                    py::arg("echo") = cfg.echo(), py::arg("warnings") = report.warnings);
  }, py::arg("config"), py::arg("out") = py::none(),
     "Runs a Monte Carlo experiment from key = value text; writes the report when out is given.");
}
