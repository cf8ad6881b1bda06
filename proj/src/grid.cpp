#include "velobound/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace velobound {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

GridSpec::GridSpec(int dim_, int n_points_, double half_width_)
    : dim(dim_), n_points(n_points_), half_width(half_width_) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("GridSpec: dim must be 1, 2 or 3");
  if (n_points < 8 || !power_of_two(n_points))
    throw std::invalid_argument("GridSpec: n_points must be a power of two >= 8");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("GridSpec: half_width must be positive and finite");
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n_points);
  return s;
}

double GridSpec::cell_measure() const {
  double m = 1.0;
  for (int d = 0; d < dim; ++d) m *= spacing();
  return m;
}

double GridSpec::momentum_axis(int index) const {
  const int n = n_points;
  const int k = (index <= n / 2) ? index : index - n;
  return std::numbers::pi * k / half_width;
}

std::vector<double> GridSpec::momentum_axis_sorted() const {
  std::vector<double> xs;
  xs.reserve(n_points);
  for (int k = -n_points / 2 + 1; k <= n_points / 2; ++k)
    xs.push_back(std::numbers::pi * k / half_width);
  return xs;
}

std::array<double, 3> GridSpec::coords_of(std::size_t flat) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t rem = flat;
  for (int d = dim - 1; d >= 0; --d) {
    const int idx = static_cast<int>(rem % n_points);
    rem /= n_points;
    x[d] = coord_axis(idx);
  }
  return x;
}

std::array<double, 3> GridSpec::momentum_of(std::size_t flat) const {
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  std::size_t rem = flat;
  for (int d = dim - 1; d >= 0; --d) {
    const int idx = static_cast<int>(rem % n_points);
    rem /= n_points;
    xi[d] = momentum_axis(idx);
  }
  return xi;
}

WaveFunction::WaveFunction(const GridSpec& g, std::vector<complexd> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("WaveFunction: value count does not match grid");
}

double WaveFunction::squared_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * grid.cell_measure();
}

double WaveFunction::norm() const {
  if (!cached_norm) cached_norm = std::sqrt(squared_norm());
  return *cached_norm;
}

bool WaveFunction::is_finite() const {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double WaveFunction::boundary_mass() const {
  const double edge = 0.9 * grid.half_width;
  double shell = 0.0, total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double m = std::norm(values[i]);
    total += m;
    const auto x = grid.coords_of(i);
    for (int d = 0; d < grid.dim; ++d) {
      if (std::abs(x[d]) >= edge) {
        shell += m;
        break;
      }
    }
  }
  return total > 0.0 ? shell / total : 0.0;
}

complexd inner(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("inner: grids do not match");
  complexd s{0.0, 0.0};
  for (std::size_t i = 0; i < a.values.size(); ++i)
    s += std::conj(a.values[i]) * b.values[i];
  return s * a.grid.cell_measure();
}

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("+: grids do not match");
  WaveFunction r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = a.values[i] + b.values[i];
  return r;
}

WaveFunction operator-(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("-: grids do not match");
  WaveFunction r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = a.values[i] - b.values[i];
  return r;
}

WaveFunction operator*(complexd c, const WaveFunction& a) {
  WaveFunction r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = c * a.values[i];
  return r;
}

WaveFunction operator*(double c, const WaveFunction& a) {
  return complexd{c, 0.0} * a;
}

}  // namespace velobound
