#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace velobound {

using complexd = std::complex<double>;

// Uniform periodic grid on [-L, L)^dim with n_points samples per axis.
// Spacing h = 2L/N; momentum lattice xi_k = pi*k/L with k in FFT order
// (k = j for j <= N/2, else j - N; the single Nyquist mode carries the
// positive frequency +N/2).
struct GridSpec {
  int dim = 1;
  int n_points = 8;
  double half_width = 1.0;

  GridSpec() = default;
  GridSpec(int dim_, int n_points_, double half_width_);

  double spacing() const { return 2.0 * half_width / n_points; }
  std::size_t size() const;
  double cell_measure() const;  // h^dim

  // Coordinates / momenta of a flattened row-major index.
  std::array<double, 3> coords_of(std::size_t flat) const;
  std::array<double, 3> momentum_of(std::size_t flat) const;

  double coord_axis(int index) const { return -half_width + index * spacing(); }
  double momentum_axis(int index) const;  // FFT order
  std::vector<double> momentum_axis_sorted() const;  // ascending, for reports

  bool operator==(const GridSpec&) const = default;
};

struct WaveFunction {
  GridSpec grid;
  std::vector<complexd> values;
  mutable std::optional<double> cached_norm;

  WaveFunction() = default;
  explicit WaveFunction(const GridSpec& g)
      : grid(g), values(g.size(), complexd{0.0, 0.0}) {}
  WaveFunction(const GridSpec& g, std::vector<complexd> v);

  double norm() const;          // sqrt(sum |psi|^2 h^dim)
  double squared_norm() const;
  bool is_finite() const;
  // Fraction of |psi|^2 carried by the outer 10% shell (any |x_j| >= 0.9 L).
  double boundary_mass() const;
};

complexd inner(const WaveFunction& a, const WaveFunction& b);  // conj(a).b h^dim

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator-(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator*(complexd c, const WaveFunction& a);
WaveFunction operator*(double c, const WaveFunction& a);

}  // namespace velobound
