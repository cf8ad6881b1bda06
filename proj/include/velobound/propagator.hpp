#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"

namespace velobound {

// Recorded evolution snapshots.  A trace is flagged invalid (and truncated)
// the first time the boundary shell carries more than 1e-8 of the mass, or if
// the propagator loses norm conservation beyond 1e-10 relative.
struct EvolutionTrace {
  std::vector<double> times;
  std::vector<WaveFunction> states;
  std::vector<double> norms;
  std::vector<double> boundary;
  std::vector<double> energies;  // Re <psi, H psi>
  std::string method;
  bool valid = true;
  std::string flag_reason;
};

// Strang splitting exp(-i dt V/2) exp(-i dt Psi(|D|^2)) exp(-i dt V/2).
// Record times snap to the nearest integer multiple of dt.
EvolutionTrace evolve_split_step(const HamiltonianHandle& h, const WaveFunction& psi0,
                                 double t_final, double dt,
                                 const std::vector<double>& record_times);

// Dense oracle: psi(t) = sum_j e^{-i lambda_j t} (v_j, psi0) v_j.
EvolutionTrace evolve_exact(const HamiltonianHandle& h, const SpectralDecomposition& d,
                            const WaveFunction& psi0,
                            const std::vector<double>& record_times);

// Exact multiplier evolution for V = 0 (throws otherwise).
EvolutionTrace evolve_free_multiplier(const HamiltonianHandle& h, const WaveFunction& psi0,
                                      const std::vector<double>& record_times);

// Least-squares centroid drift over the recorded times.
struct VelocityFit {
  std::array<double, 3> slope{0.0, 0.0, 0.0};
  std::array<double, 3> intercept{0.0, 0.0, 0.0};
};
VelocityFit centroid_velocity(const EvolutionTrace& trace);

// Incremental evolution handle for quadrature loops: call with ascending t.
using Evolution = std::function<WaveFunction(double)>;
Evolution make_multiplier_evolution(const HamiltonianHandle& h, WaveFunction psi0);
Evolution make_dense_evolution(const HamiltonianHandle& h, const SpectralDecomposition& d,
                               WaveFunction psi0);
Evolution make_split_step_evolution(const HamiltonianHandle& h, WaveFunction psi0,
                                    double dt);

}  // namespace velobound
