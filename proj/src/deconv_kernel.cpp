#include "voldens/deconv_kernel.hpp"

#include "voldens/errors.hpp"
#include "voldens/noise_model.hpp"
#include "voldens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace voldens {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A 512-node rule resolves e^{-isx} on [-1, 1] comfortably up to |x| ~ 900;
// past this limit the s-interval is split into panels.
constexpr double kSinglePanelLimit = 400.0;

constexpr double kImagTolerance = 1e-9;

void
check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw DomainError("bandwidth must be positive and finite, got " + std::to_string(h));
  if (1.0 / h > kPhiKMaxT)
    throw RangeError("bandwidth h = " + std::to_string(h) +
                     " too small: 1/h exceeds the phi_k range guard");
}

// phi_w(s) / phi_k(s/h) evaluated in log space for the noise factor.
std::complex<double>
ratio(const KernelSpec& spec, double h, double s)
{
  const double pw = spec.phi_w(s);
  if (pw == 0.0)
    return 0.0;
  return pw * std::exp(-log_phi_k(s / h));
}

void
check_imag(double re, double im, double scale, double x)
{
  const double ref = std::max(std::abs(re), scale);
  if (std::abs(im) > kImagTolerance * ref)
    throw NumericalFailure("v_h(" + std::to_string(x) + "): imaginary part not negligible",
                           std::abs(im) / ref);
}

} // namespace

DeconvKernel::DeconvKernel(KernelSpec spec, double h)
  : spec_(std::move(spec))
  , h_(h)
{
  check_bandwidth(h_);
  const auto& rule = gauss_legendre(kDeconvNodes);
  coeffs_.resize(rule.size());
  double g0 = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    coeffs_[k] = rule.weights[k] * ratio(spec_, h_, rule.nodes[k]) / kTwoPi;
    g0 += std::abs(coeffs_[k]);
  }
  gamma0_ = g0;
}

double
DeconvKernel::operator()(double x) const
{
  if (std::abs(x) > kSinglePanelLimit)
    return composite(x);
  const auto& rule = gauss_legendre(kDeconvNodes);
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    sum += coeffs_[k] * std::polar(1.0, -rule.nodes[k] * x);
  check_imag(sum.real(), sum.imag(), gamma0_, x);
  return sum.real();
}

double
DeconvKernel::composite(double x) const
{
  const auto panels = static_cast<std::size_t>(std::ceil(std::abs(x) / kSinglePanelLimit));
  const auto& rule = gauss_legendre(kDeconvNodes);
  const double width = 2.0 / static_cast<double>(panels);
  std::complex<double> sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double half = 0.5 * width;
    const double mid = -1.0 + width * static_cast<double>(p) + half;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double s = mid + half * rule.nodes[k];
      sum += half * rule.weights[k] * ratio(spec_, h_, s) * std::polar(1.0, -s * x);
    }
  }
  sum /= kTwoPi;
  check_imag(sum.real(), sum.imag(), gamma0_, x);
  return sum.real();
}

double
vh_quadrature(const KernelSpec& spec, double h, double x)
{
  return DeconvKernel(spec, h)(x);
}

double
gamma0(const KernelSpec& spec, double h, std::size_t nodes)
{
  check_bandwidth(h);
  const auto& rule = gauss_legendre(nodes);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k)
    sum += rule.weights[k] * std::abs(ratio(spec, h, rule.nodes[k]));
  return sum / kTwoPi;
}

double
gamma1(double h, double x)
{
  if (!(h > 0.0))
    throw DomainError("gamma1: h must be positive");
  if (x == 0.0 || !std::isfinite(x))
    throw DomainError("gamma1: x must be finite and nonzero");
  const double c = 1.0 + std::numbers::pi / std::abs(x);
  return std::exp(0.5 * std::numbers::pi / h) +
         std::exp(0.5 * std::numbers::pi * c / h) * std::log(c / h) / h;
}

DeconvTable
DeconvTable::build(const KernelSpec& spec, double h, double x_min, double x_max, std::size_t n_points)
{
  if (n_points < 2)
    throw InputError("DeconvTable: n_points must be at least 2");
  if (!(x_min < x_max))
    throw InputError("DeconvTable: x_min must be below x_max");

  DeconvTable table;
  table.kernel_ = std::make_shared<const DeconvKernel>(spec, h);
  table.x_min_ = x_min;
  table.x_max_ = x_max;
  table.step_ = (x_max - x_min) / static_cast<double>(n_points - 1);
  table.inv_step_ = 1.0 / table.step_;
  table.last_ = static_cast<double>(n_points - 1);
  table.values_.resize(n_points);

  const auto& kernel = *table.kernel_;
  if (std::max(std::abs(x_min), std::abs(x_max)) > kSinglePanelLimit) {
    for (std::size_t i = 0; i < n_points; ++i)
      table.values_[i] = kernel(x_min + table.step_ * static_cast<double>(i));
    return table;
  }

  // Phasors advance by a fixed rotation per lattice step and are re-anchored
  // every block, keeping the accumulated rounding near 1e-14.
  constexpr std::size_t kBlock = 64;
  const auto& rule = gauss_legendre(kDeconvNodes);
  const auto coeffs = kernel.coefficients();
  const std::size_t nk = coeffs.size();
  std::vector<std::complex<double>> rotation(nk);
  std::vector<std::complex<double>> phasor(nk);
  for (std::size_t k = 0; k < nk; ++k)
    rotation[k] = std::polar(1.0, -rule.nodes[k] * table.step_);

  for (std::size_t start = 0; start < n_points; start += kBlock) {
    const double x0 = x_min + table.step_ * static_cast<double>(start);
    for (std::size_t k = 0; k < nk; ++k)
      phasor[k] = coeffs[k] * std::polar(1.0, -rule.nodes[k] * x0);
    const std::size_t stop = std::min(n_points, start + kBlock);
    for (std::size_t i = start; i < stop; ++i) {
      std::complex<double> sum = 0.0;
      for (std::size_t k = 0; k < nk; ++k) {
        sum += phasor[k];
        phasor[k] *= rotation[k];
      }
      check_imag(sum.real(), sum.imag(), kernel.gamma0(), x_min + table.step_ * static_cast<double>(i));
      table.values_[i] = sum.real();
    }
  }
  return table;
}

std::vector<double>
DeconvTable::grid_x() const
{
  std::vector<double> x(values_.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = x_min_ + step_ * static_cast<double>(i);
  x.back() = x_max_;
  return x;
}

double
DeconvTable::edge_or_direct(double x) const
{
  if (x == x_max_)
    return values_.back();
  return (*kernel_)(x);
}

double
vh_multivariate(std::span<const DeconvTable* const> tables, std::span<const double> x)
{
  if (tables.empty())
    throw InputError("vh_multivariate: need at least one table");
  if (tables.size() != x.size())
    throw InputError("vh_multivariate: dimension mismatch between tables and point");
  const DeconvTable& first = *tables.front();
  double prod = 1.0;
  for (std::size_t j = 0; j < tables.size(); ++j) {
    const DeconvTable& t = *tables[j];
    if (t.bandwidth() != first.bandwidth() || t.kernel().name() != first.kernel().name())
      throw ConfigError("vh_multivariate: tables must share bandwidth and kernel");
    prod *= t(x[j]);
  }
  return prod;
}

} // namespace voldens
