#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace voldens {

/// A smoothing kernel w given through its characteristic function phi_w,
/// which must be real, even, equal to 1 at the origin and vanish outside
/// [-1, 1]. Near the support edge phi_w(1 - t) ~ edge_coeff * t^rho.
///
/// Immutable after construction.
class KernelSpec
{
public:
  KernelSpec(std::string name,
             std::function<double(double)> phi_w,
             double rho,
             double edge_coeff);

  const std::string& name() const noexcept { return name_; }
  double rho() const noexcept { return rho_; }
  double edge_coeff() const noexcept { return edge_coeff_; }

  /// phi_w(s), zero for |s| >= 1.
  double phi_w(double s) const;

  /// phi_w at the nodes of the 256-point Gauss-Legendre rule.
  const std::vector<double>& phi_w_at_nodes() const noexcept { return at_nodes_; }

private:
  std::string name_;
  std::function<double(double)> phi_w_;
  double rho_;
  double edge_coeff_;
  std::vector<double> at_nodes_;
};

inline constexpr std::size_t kKernelNodes = 256;

/// Shipped kernels: "poly3" with phi_w(s) = (1 - s^2)^3 (rho = 3, A = 8) and
/// "poly4" with phi_w(s) = (1 - s^2)^4 (rho = 4, A = 16).
KernelSpec builtin_kernel(std::string_view name);

std::vector<std::string> builtin_kernel_names();

/// w(x) = (1/2pi) int_{-1}^{1} phi_w(s) cos(s x) ds.
double eval_w(const KernelSpec& spec, double x);

struct KernelMoments
{
  double m0;       ///< int w
  double m2_abs;   ///< int u^2 |w(u)| du, truncated part plus tail estimate
  double mu2;      ///< int u^2 w(u) du
  double radius;   ///< truncation radius of the direct quadrature
  double tail_bound; ///< bound on the neglected/estimated tail contributions
};

/// Moments of w by composite quadrature on [-R, R] with the tails beyond R
/// handled through the edge law of phi_w.
KernelMoments kernel_moments(const KernelSpec& spec);

} // namespace voldens
