#pragma once

#include <cstddef>
#include <vector>

namespace voldens {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes in ascending order.
struct GaussLegendre
{
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Computes the n-point rule by Newton iteration on P_n. Results are cached
/// per n; the returned reference stays valid for the program lifetime.
const GaussLegendre& gauss_legendre(std::size_t n);

/// Composite rule: `panels` equal subintervals of [a, b], each with the
/// n-point Gauss-Legendre rule.
template<class F>
double
integrate_composite(F&& f, double a, double b, std::size_t panels, std::size_t n)
{
  const auto& rule = gauss_legendre(n);
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double half = 0.5 * width;
    const double mid = lo + half;
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k)
      panel += rule.weights[k] * f(mid + half * rule.nodes[k]);
    total += half * panel;
  }
  return total;
}

} // namespace voldens
