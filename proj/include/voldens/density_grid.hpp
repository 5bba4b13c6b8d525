#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voldens {

/// Uniform axis lo:hi:n (n >= 2 points, both ends included).
struct AxisSpec
{
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  std::vector<double> points() const;

  /// Parses "lo:hi:n"; throws InputError on malformed text.
  static AxisSpec parse(std::string_view text);
  std::string to_string() const;
};

/// Density values on a tensor lattice; values are row-major with the last
/// axis varying fastest.
class DensityGrid
{
public:
  DensityGrid() = default;
  explicit DensityGrid(std::vector<std::vector<double>> axes);
  DensityGrid(std::vector<std::vector<double>> axes, std::vector<double> values);

  std::size_t dimension() const noexcept { return axes_.size(); }
  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }
  const std::vector<double>& axis(std::size_t k) const { return axes_.at(k); }
  std::vector<std::size_t> shape() const;
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t flat_index(std::span<const std::size_t> index) const;
  double at(std::span<const std::size_t> index) const { return values_[flat_index(index)]; }
  double& at(std::span<const std::size_t> index) { return values_[flat_index(index)]; }

  /// Coordinates of the lattice point with the given flat index.
  std::vector<double> point(std::size_t flat) const;

  /// Tensor trapezoid weights matching values().
  std::vector<double> trapezoid_weights() const;

  /// Trapezoid integral of the values over the lattice.
  double integral() const;

  /// Throws InputError unless the shape matches and all values are finite.
  void validate() const;

private:
  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;
};

/// Long-form CSV: header "x,fhat" (p = 1) or "x1,...,xp,fhat"; values in
/// round-trip precision.
void write_density_csv(const DensityGrid& grid, std::ostream& out);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

} // namespace voldens
