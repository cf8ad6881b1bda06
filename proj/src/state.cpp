#include "velobound/state.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "velobound/fft.hpp"

namespace velobound {

WaveFunction gaussian_packet(const GridSpec& grid, const std::array<double, 3>& center,
                             const std::array<double, 3>& momentum, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be positive");
  WaveFunction psi(grid);
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const auto x = grid.coords_of(i);
    double r2 = 0.0, phase = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      const double dx = x[d] - center[d];
      r2 += dx * dx;
      phase += momentum[d] * x[d];
    }
    psi.values[i] = std::exp(-r2 / (4.0 * sigma * sigma)) *
                    complexd{std::cos(phase), std::sin(phase)};
  }
  const double n = psi.norm();
  if (!(n > 0.0)) throw std::runtime_error("gaussian_packet: zero norm");
  for (auto& v : psi.values) v /= n;
  psi.cached_norm.reset();
  return psi;
}

WaveFunction plane_wave(const GridSpec& grid, std::size_t mode_flat) {
  if (mode_flat >= grid.size())
    throw std::invalid_argument("plane_wave: mode index out of range");
  WaveFunction psi(grid);
  const auto xi = grid.momentum_of(mode_flat);
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const auto x = grid.coords_of(i);
    double phase = 0.0;
    for (int d = 0; d < grid.dim; ++d) phase += xi[d] * x[d];
    psi.values[i] = complexd{std::cos(phase), std::sin(phase)};
  }
  const double n = psi.norm();
  for (auto& v : psi.values) v /= n;
  psi.cached_norm.reset();
  return psi;
}

WaveFunction random_band_limited(const GridSpec& grid, double xi_band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  WaveFunction psi(grid);
  bool any = false;
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const auto xi = grid.momentum_of(i);
    double s = 0.0;
    for (int d = 0; d < grid.dim; ++d) s += xi[d] * xi[d];
    if (std::sqrt(s) <= xi_band) {
      psi.values[i] = complexd{uni(rng), uni(rng)};
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("random_band_limited: band contains no modes");
  fft_inverse(grid.dim, grid.n_points, psi.values);
  const double n = psi.norm();
  for (auto& v : psi.values) v /= n;
  psi.cached_norm.reset();
  return psi;
}

std::array<double, 3> centroid(const WaveFunction& psi) {
  std::array<double, 3> num{0.0, 0.0, 0.0};
  double den = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double m = std::norm(psi.values[i]);
    den += m;
    const auto x = psi.grid.coords_of(i);
    for (int d = 0; d < psi.grid.dim; ++d) num[d] += m * x[d];
  }
  if (!(den > 0.0)) throw std::runtime_error("centroid: zero-norm state");
  for (int d = 0; d < psi.grid.dim; ++d) num[d] /= den;
  return num;
}

}  // namespace velobound
