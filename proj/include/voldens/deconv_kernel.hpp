#pragma once

#include "voldens/smoothing_kernel.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace voldens {

inline constexpr std::size_t kDeconvNodes = 512;

/// The deconvolution kernel
///   v_h(x) = (1/2pi) int_{-1}^{1} phi_w(s) / phi_k(s/h) e^{-isx} ds
/// for one bandwidth, with the quadrature weights phi_w/phi_k folded into
/// precomputed coefficients. v_h is real but not even: phi_k carries the
/// phase of the skewed log-chi-square noise.
class DeconvKernel
{
public:
  /// Throws RangeError when 1/h exceeds the phi_k range guard.
  DeconvKernel(KernelSpec spec, double h);

  double bandwidth() const noexcept { return h_; }
  const KernelSpec& kernel() const noexcept { return spec_; }

  /// v_h(x). Throws NumericalFailure when the discarded imaginary part is
  /// not negligible (above 1e-9 of max(|Re|, gamma0)).
  double operator()(double x) const;

  /// gamma_0(h) = (1/2pi) int |phi_w(s) / phi_k(s/h)| ds.
  double gamma0() const noexcept { return gamma0_; }

  /// Coefficients c_k with v_h(x) = Re sum_k c_k e^{-i s_k x} (|x| small).
  std::span<const std::complex<double>> coefficients() const noexcept { return coeffs_; }

private:
  double composite(double x) const;

  KernelSpec spec_;
  double h_;
  std::vector<std::complex<double>> coeffs_;
  double gamma0_;
};

double vh_quadrature(const KernelSpec& spec, double h, double x);

/// gamma_0(h) with an n-point Gauss-Legendre rule.
double gamma0(const KernelSpec& spec, double h, std::size_t nodes = kDeconvNodes);

/// gamma_1(h, x) = e^{pi/(2h)} + (1/h) exp((pi/2)(1 + pi/|x|)/h) log((1 + pi/|x|)/h).
/// Throws DomainError for x = 0 or h <= 0.
double gamma1(double h, double x);

/// v_h tabulated on a uniform lattice, read back by linear interpolation.
/// Abscissae outside [x_min, x_max] fall back to direct quadrature.
/// Immutable after build.
class DeconvTable
{
public:
  static DeconvTable build(const KernelSpec& spec,
                           double h,
                           double x_min,
                           double x_max,
                           std::size_t n_points);

  double bandwidth() const noexcept { return kernel_->bandwidth(); }
  const KernelSpec& kernel() const noexcept { return kernel_->kernel(); }
  const DeconvKernel& deconv_kernel() const noexcept { return *kernel_; }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::vector<double> grid_x() const;
  std::span<const double> values() const noexcept { return values_; }
  double sup_bound() const noexcept { return kernel_->gamma0(); }

  double operator()(double x) const
  {
    const double pos = (x - x_min_) * inv_step_;
    if (pos >= 0.0 && pos < last_) {
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      return values_[i] + frac * (values_[i + 1] - values_[i]);
    }
    return edge_or_direct(x);
  }

private:
  DeconvTable() = default;
  double edge_or_direct(double x) const;

  std::shared_ptr<const DeconvKernel> kernel_;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double step_ = 0.0;
  double inv_step_ = 0.0;
  double last_ = 0.0;
  std::vector<double> values_;
};

/// prod_j v_h(x_j) over p tables sharing one bandwidth and kernel.
/// Throws ConfigError on mixed tables and InputError on size mismatch.
double vh_multivariate(std::span<const DeconvTable* const> tables, std::span<const double> x);

} // namespace voldens
