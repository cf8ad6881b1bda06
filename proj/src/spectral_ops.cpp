#include "velobound/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "velobound/fft.hpp"

namespace velobound {

std::vector<double> multiplier_table(const GridSpec& grid, const MomentumFn& m) {
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = m(grid.momentum_of(i), grid.dim);
    if (!std::isfinite(t[i]))
      throw std::invalid_argument("multiplier_table: non-finite multiplier value");
  }
  return t;
}

std::vector<complexd> phase_table(
    const GridSpec& grid,
    const std::function<complexd(const std::array<double, 3>&, int)>& m) {
  std::vector<complexd> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = m(grid.momentum_of(i), grid.dim);
    if (!std::isfinite(t[i].real()) || !std::isfinite(t[i].imag()))
      throw std::invalid_argument("phase_table: non-finite multiplier value");
  }
  return t;
}

namespace {

template <class T>
WaveFunction apply_table(const WaveFunction& psi, const std::vector<T>& table) {
  if (table.size() != psi.grid.size())
    throw std::invalid_argument("apply_multiplier: table size does not match grid");
  WaveFunction out(psi.grid);
  out.values = psi.values;
  fft_forward(psi.grid.dim, psi.grid.n_points, out.values);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= table[i];
  fft_inverse(psi.grid.dim, psi.grid.n_points, out.values);
  return out;
}

}  // namespace

WaveFunction apply_multiplier(const WaveFunction& psi, const std::vector<double>& table) {
  for (double v : table)
    if (!std::isfinite(v))
      throw std::invalid_argument("apply_multiplier: non-finite multiplier value");
  return apply_table(psi, table);
}

WaveFunction apply_multiplier(const WaveFunction& psi, const std::vector<complexd>& table) {
  for (const auto& v : table)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("apply_multiplier: non-finite multiplier value");
  return apply_table(psi, table);
}

WaveFunction apply_multiplier(const WaveFunction& psi, const MomentumFn& m) {
  return apply_table(psi, multiplier_table(psi.grid, m));
}

std::vector<double> position_table(const GridSpec& grid, const PositionFn& w) {
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = w(grid.coords_of(i), grid.dim);
    if (!std::isfinite(t[i]))
      throw std::invalid_argument("position_table: non-finite field value");
  }
  return t;
}

WaveFunction position_multiply(const WaveFunction& psi, const std::vector<double>& field) {
  if (field.size() != psi.grid.size())
    throw std::invalid_argument("position_multiply: field size does not match grid");
  WaveFunction out(psi.grid);
  for (std::size_t i = 0; i < field.size(); ++i) out.values[i] = field[i] * psi.values[i];
  return out;
}

std::vector<double> kinetic_table(const GridSpec& grid, const FractionalSymbol& sym) {
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto xi = grid.momentum_of(i);
    double s = 0.0;
    for (int d = 0; d < grid.dim; ++d) s += xi[d] * xi[d];
    t[i] = sym.value(s);
  }
  return t;
}

std::vector<double> kinetic_velocity_table(const GridSpec& grid,
                                           const FractionalSymbol& sym, int axis) {
  if (axis < 0 || axis >= grid.dim)
    throw std::invalid_argument("kinetic_velocity_table: axis out of range");
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto xi = grid.momentum_of(i);
    double s = 0.0;
    for (int d = 0; d < grid.dim; ++d) s += xi[d] * xi[d];
    t[i] = sym.deriv1(s) * xi[axis];
  }
  return t;
}

}  // namespace velobound
