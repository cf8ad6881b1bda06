#pragma once

#include <array>
#include <functional>
#include <vector>

#include "velobound/grid.hpp"
#include "velobound/symbol.hpp"

namespace velobound {

// Scalar fields over the momentum / position lattice, flattened row-major.
using MomentumFn = std::function<double(const std::array<double, 3>&, int dim)>;
using PositionFn = std::function<double(const std::array<double, 3>&, int dim)>;

// Tabulate m(xi) over the grid's momentum lattice (FFT order).  Rejects
// non-finite values.
std::vector<double> multiplier_table(const GridSpec& grid, const MomentumFn& m);
std::vector<complexd> phase_table(const GridSpec& grid,
                                  const std::function<complexd(const std::array<double, 3>&, int)>& m);

// psi -> F^{-1}[ m(xi) F psi ].  Table must be in FFT order; non-finite
// entries are rejected.
WaveFunction apply_multiplier(const WaveFunction& psi, const std::vector<double>& table);
WaveFunction apply_multiplier(const WaveFunction& psi, const std::vector<complexd>& table);
WaveFunction apply_multiplier(const WaveFunction& psi, const MomentumFn& m);

// psi -> w(x) psi pointwise.
std::vector<double> position_table(const GridSpec& grid, const PositionFn& w);
WaveFunction position_multiply(const WaveFunction& psi, const std::vector<double>& field);

// Convenience kinetic tables.
std::vector<double> kinetic_table(const GridSpec& grid, const FractionalSymbol& sym);     // Psi(|xi|^2)
std::vector<double> kinetic_velocity_table(const GridSpec& grid, const FractionalSymbol& sym,
                                           int axis);  // Psi'(|xi|^2) xi_axis

}  // namespace velobound
