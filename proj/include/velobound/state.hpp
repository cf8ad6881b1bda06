#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "velobound/grid.hpp"

namespace velobound {

// Normalized Gaussian packet exp(-|x-c|^2/(4 sigma^2)) exp(i xi0.x); the
// probability density has standard deviation sigma per axis.
WaveFunction gaussian_packet(const GridSpec& grid, const std::array<double, 3>& center,
                             const std::array<double, 3>& momentum, double sigma);

// Single lattice plane wave e^{i xi_k . x} (unit normalized).
WaveFunction plane_wave(const GridSpec& grid, std::size_t mode_flat);

// Seeded random state with modes restricted to |xi| <= xi_band, unit norm.
WaveFunction random_band_limited(const GridSpec& grid, double xi_band, std::uint64_t seed);

// Centroid <x>_d = Re inner(psi, x_d psi) / inner(psi, psi).
std::array<double, 3> centroid(const WaveFunction& psi);

}  // namespace velobound
