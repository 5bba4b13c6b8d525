#include "voldens/density_grid.hpp"

#include "voldens/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace voldens {

namespace {

double
parse_double(std::string_view s, std::string_view what)
{
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InputError("invalid number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

std::vector<double>
trapezoid_1d(const std::vector<double>& x)
{
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double half = 0.5 * (x[i + 1] - x[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

} // namespace

std::vector<double>
AxisSpec::points() const
{
  if (n < 2 || !(lo < hi))
    throw InputError("axis needs lo < hi and at least 2 points");
  std::vector<double> p(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    p[i] = lo + step * static_cast<double>(i);
  p.back() = hi;
  return p;
}

AxisSpec
AxisSpec::parse(std::string_view text)
{
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos)
    throw InputError("grid spec must be lo:hi:n, got '" + std::string(text) + "'");
  AxisSpec a;
  a.lo = parse_double(text.substr(0, c1), "grid lower bound");
  a.hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "grid upper bound");
  const double n = parse_double(text.substr(c2 + 1), "grid point count");
  if (n < 2 || n != std::floor(n))
    throw InputError("grid point count must be an integer >= 2");
  a.n = static_cast<std::size_t>(n);
  if (!(a.lo < a.hi))
    throw InputError("grid spec needs lo < hi");
  return a;
}

std::string
AxisSpec::to_string() const
{
  return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(n);
}

DensityGrid::DensityGrid(std::vector<std::vector<double>> axes)
  : axes_(std::move(axes))
{
  std::size_t total = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_)
    total *= a.size();
  values_.assign(total, 0.0);
}

DensityGrid::DensityGrid(std::vector<std::vector<double>> axes, std::vector<double> values)
  : axes_(std::move(axes))
  , values_(std::move(values))
{
  validate();
}

std::vector<std::size_t>
DensityGrid::shape() const
{
  std::vector<std::size_t> s;
  for (const auto& a : axes_)
    s.push_back(a.size());
  return s;
}

std::size_t
DensityGrid::flat_index(std::span<const std::size_t> index) const
{
  if (index.size() != axes_.size())
    throw IndexError("DensityGrid: index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (index[k] >= axes_[k].size())
      throw IndexError("DensityGrid: index out of range");
    flat = flat * axes_[k].size() + index[k];
  }
  return flat;
}

std::vector<double>
DensityGrid::point(std::size_t flat) const
{
  std::vector<double> x(axes_.size());
  for (std::size_t k = axes_.size(); k-- > 0;) {
    const std::size_t n = axes_[k].size();
    x[k] = axes_[k][flat % n];
    flat /= n;
  }
  return x;
}

std::vector<double>
DensityGrid::trapezoid_weights() const
{
  std::vector<double> w(values_.size(), 1.0);
  std::size_t inner = values_.size();
  for (const auto& a : axes_) {
    const auto wk = trapezoid_1d(a);
    inner /= a.size();
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] *= wk[(i / inner) % a.size()];
  }
  return w;
}

double
DensityGrid::integral() const
{
  const auto w = trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += w[i] * values_[i];
  return s;
}

void
DensityGrid::validate() const
{
  std::size_t total = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_)
    total *= a.size();
  if (total != values_.size())
    throw InputError("DensityGrid: values do not match axes shape");
  for (double v : values_)
    if (!std::isfinite(v))
      throw InputError("DensityGrid: non-finite value");
}

std::string
format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void
write_density_csv(const DensityGrid& grid, std::ostream& out)
{
  const std::size_t p = grid.dimension();
  if (p == 1) {
    out << "x,fhat\n";
  } else {
    for (std::size_t k = 0; k < p; ++k)
      out << 'x' << (k + 1) << ',';
    out << "fhat\n";
  }
  const auto values = grid.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (double c : grid.point(i))
      out << format_double(c) << ',';
    out << format_double(values[i]) << '\n';
  }
}

} // namespace voldens
