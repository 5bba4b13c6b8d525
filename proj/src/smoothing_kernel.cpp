#include "voldens/smoothing_kernel.hpp"

#include "voldens/errors.hpp"
#include "voldens/quadrature.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace voldens {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// w(x) through a single 256-node rule is accurate while the cosine has fewer
// oscillations than the rule resolves; beyond that the interval is split.
constexpr double kSinglePanelLimit = 200.0;

// int_R^inf u^{-m} e^{iu} du by its asymptotic series (R >> m).
std::complex<double>
oscillatory_tail(double m, double radius)
{
  using namespace std::complex_literals;
  std::complex<double> term = 1.0;
  std::complex<double> sum = 0.0;
  for (int k = 0; k < 40; ++k) {
    sum += term;
    const double grow = (m + k) / radius;
    term *= -1.0i * grow;
    if (std::abs(term) < 1e-18 || grow > 0.5)
      break;
  }
  return 1.0i * std::exp(1.0i * radius) * std::pow(radius, -m) * sum;
}

} // namespace

KernelSpec::KernelSpec(std::string name,
                       std::function<double(double)> phi_w,
                       double rho,
                       double edge_coeff)
  : name_(std::move(name))
  , phi_w_(std::move(phi_w))
  , rho_(rho)
  , edge_coeff_(edge_coeff)
{
  if (!phi_w_)
    throw ConfigError("kernel '" + name_ + "': missing characteristic function");
  if (!(rho_ > 0.0) || !(edge_coeff_ > 0.0))
    throw ConfigError("kernel '" + name_ + "': rho and edge coefficient must be positive");
  if (std::abs(phi_w_(0.0) - 1.0) > 1e-12)
    throw ConfigError("kernel '" + name_ + "': phi_w(0) must equal 1");
  for (int i = 1; i <= 64; ++i) {
    const double s = i / 64.0 - 1e-3;
    const double a = phi_w_(s);
    const double b = phi_w_(-s);
    if (!std::isfinite(a) || std::abs(a - b) > 1e-13 * (1.0 + std::abs(a)))
      throw ConfigError("kernel '" + name_ + "': phi_w must be real and even");
  }
  const double t = 1e-4;
  const double edge = phi_w_(1.0 - t) / (edge_coeff_ * std::pow(t, rho_));
  if (std::abs(edge - 1.0) > 0.05)
    throw ConfigError("kernel '" + name_ + "': edge law phi_w(1-t) ~ A t^rho violated");

  const auto& rule = gauss_legendre(kKernelNodes);
  at_nodes_.reserve(rule.size());
  for (double s : rule.nodes)
    at_nodes_.push_back(phi_w_(s));
}

double
KernelSpec::phi_w(double s) const
{
  return std::abs(s) >= 1.0 ? 0.0 : phi_w_(s);
}

KernelSpec
builtin_kernel(std::string_view name)
{
  if (name == "poly3")
    return KernelSpec(
      "poly3",
      [](double s) {
        const double q = 1.0 - s * s;
        return q * q * q;
      },
      3.0,
      8.0);
  if (name == "poly4")
    return KernelSpec(
      "poly4",
      [](double s) {
        const double q = 1.0 - s * s;
        return (q * q) * (q * q);
      },
      4.0,
      16.0);
  throw NotFoundError("unknown kernel '" + std::string(name) + "'");
}

std::vector<std::string>
builtin_kernel_names()
{
  return { "poly3", "poly4" };
}

double
eval_w(const KernelSpec& spec, double x)
{
  const auto& rule = gauss_legendre(kKernelNodes);
  const double ax = std::abs(x);
  if (ax <= kSinglePanelLimit) {
    const auto& phi = spec.phi_w_at_nodes();
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k)
      sum += rule.weights[k] * phi[k] * std::cos(rule.nodes[k] * x);
    return sum / kTwoPi;
  }
  const auto panels = static_cast<std::size_t>(std::ceil(ax / kSinglePanelLimit));
  const double integral = integrate_composite(
    [&](double s) { return spec.phi_w(s) * std::cos(s * x); }, -1.0, 1.0, panels, kKernelNodes);
  return integral / kTwoPi;
}

namespace {

struct TruncatedMoments
{
  double m0;
  double m2_abs;
  double mu2;
};

TruncatedMoments
truncated_moments(const KernelSpec& spec, double radius)
{
  // w is even: integrate [0, R] and double. Panels of width ~2 resolve the
  // 2pi-periodic oscillation of the tail.
  const auto panels = static_cast<std::size_t>(std::ceil(radius / 2.0));
  const auto& rule = gauss_legendre(16);
  const double width = radius / static_cast<double>(panels);
  TruncatedMoments out{ 0.0, 0.0, 0.0 };
  for (std::size_t p = 0; p < panels; ++p) {
    const double half = 0.5 * width;
    const double mid = width * static_cast<double>(p) + half;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double u = mid + half * rule.nodes[k];
      const double wu = eval_w(spec, u);
      const double weight = half * rule.weights[k];
      out.m0 += weight * wu;
      out.m2_abs += weight * u * u * std::abs(wu);
      out.mu2 += weight * u * u * wu;
    }
  }
  out.m0 *= 2.0;
  out.m2_abs *= 2.0;
  out.mu2 *= 2.0;
  return out;
}

} // namespace

KernelMoments
kernel_moments(const KernelSpec& spec)
{
  const double rho = spec.rho();
  if (rho <= 2.0)
    throw NumericalFailure("kernel_moments: int u^2|w(u)| du diverges for rho <= 2", rho);

  // Leading tail of w: (A Gamma(rho+1)/pi) u^{-(rho+1)} cos(u - (rho+1)pi/2).
  const double amp = spec.edge_coeff() * std::tgamma(rho + 1.0) / std::numbers::pi;
  const std::complex<double> phase = std::polar(1.0, -(rho + 1.0) * std::numbers::pi / 2.0);
  auto tails = [&](double radius) {
    const double t0 = 2.0 * amp * std::real(phase * oscillatory_tail(rho + 1.0, radius));
    const double t2 = 2.0 * amp * std::real(phase * oscillatory_tail(rho - 1.0, radius));
    const double t2_abs =
      2.0 * amp * (2.0 / std::numbers::pi) * std::pow(radius, 2.0 - rho) / (rho - 2.0);
    return std::array<double, 3>{ t0, t2, t2_abs };
  };

  const double radius = 1000.0;
  const auto full = truncated_moments(spec, radius);
  const auto t_full = tails(radius);
  const auto half = truncated_moments(spec, radius / 2.0);
  const auto t_half = tails(radius / 2.0);

  KernelMoments m;
  m.m0 = full.m0 + t_full[0];
  m.mu2 = full.mu2 + t_full[1];
  m.m2_abs = full.m2_abs + t_full[2];
  m.radius = radius;
  m.tail_bound = t_full[2];

  const double residual = std::max(std::abs(m.mu2 - (half.mu2 + t_half[1])),
                                   std::abs(m.m0 - (half.m0 + t_half[0])));
  if (!std::isfinite(residual) || residual > 1e-5 * std::max(1.0, std::abs(m.mu2)))
    throw NumericalFailure("kernel_moments: quadrature did not converge", residual);
  return m;
}

} // namespace voldens
