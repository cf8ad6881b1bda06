#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "velobound/cutoff.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"
#include "velobound/propagator.hpp"
#include "velobound/symbol.hpp"

namespace velobound {

// Velocity window in the scaled radial variable v = |x| / (2t).  Sharp
// windows are half-open [lo, hi) so that adjacent windows tile exactly;
// smooth windows use the C-infinity step with the declared transition width.
struct VelocityWindow {
  double theta_low = 0.0;
  double theta_high = std::numeric_limits<double>::infinity();
  bool smooth = false;
  double width = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// weight(x) over the grid: 1 inside {theta_low <= |x|/(2t) < theta_high}.
std::vector<double> radial_cutoff_field(const GridSpec& grid, double t,
                                        const VelocityWindow& window);

// Per-axis deviation (Psi'(|D|^2) D_j - x_j/(2t)) psi.
std::vector<WaveFunction> flux_deviation(const WaveFunction& psi,
                                         const FractionalSymbol& sym, double t);

// Log-spaced quadrature nodes 10^{i/per_decade} in [t_min, t_max], with the
// extras merged in; sorted, deduplicated.
std::vector<double> schedule_nodes(double t_min, double t_max, int per_decade = 16,
                                   std::vector<double> extras = {});

struct ExperimentRow {
  double t = 0.0;
  double integrand = 0.0;
  double cumulative = 0.0;
  double boundary_mass = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered
  bool flagged = false;
  std::string flag_reason;

  // Cumulative value at the recorded node t (exact match expected).
  double cumulative_at(double t) const;
};

// Group-speed extremes 2 |xi| Psi'(|xi|^2) over lattice modes whose kinetic
// energy Psi(|xi|^2) lies in the support of f.
struct BandKinematics {
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = 0.0;
  int modes = 0;
};

BandKinematics band_kinematics(const GridSpec& grid, const FractionalSymbol& sym,
                               const SmoothCutoff& f);

// Evolution backend for the dt/t experiments.
struct VelocityExperimentSetup {
  enum class Backend { multiplier, dense, split_step };
  Backend backend = Backend::multiplier;
  double dt = 1e-3;                          // split_step only
  const SpectralDecomposition* decomp = nullptr;  // dense only
  std::string potential_id = "zero";
};

// f(H) phi together with an incremental propagator for it.
struct PreparedState {
  WaveFunction filtered;
  Evolution evolve;
  std::string backend_name;
};

PreparedState prepare_filtered_evolution(const HamiltonianHandle& h, const SmoothCutoff& f,
                                         const WaveFunction& phi,
                                         const VelocityExperimentSetup& setup);

// dt/t quadrature of || F(|x|/(2t) in window) f(H) e^{-itH} phi ||^2 over
// log-spaced nodes in [1, t_end]; trapezoid in log t.  Boundary-mass
// violations (> 1e-8) truncate the report and set the flag.
//
// minimal: window [0, theta0), nodes to 2T with T and 2T included.
// maximal: window [Theta, theta), nodes to T; requires Theta > C_f (max band
//          group speed), reported in the metadata.
// middle : integrand uses the flux deviation inside [theta1, theta2), to 2T.
// All three require supp f to avoid the supplied point-spectrum values and a
// horizon margin half_width >= 2 v_max T (precondition named in the error).
ExperimentReport minimal_bound_integral(const HamiltonianHandle& h, const SmoothCutoff& f,
                                        double theta0, const WaveFunction& phi, double T,
                                        const VelocityExperimentSetup& setup,
                                        const std::vector<double>& pp_values);

ExperimentReport maximal_bound_integral(const HamiltonianHandle& h, const SmoothCutoff& f,
                                        double Theta, double theta, const WaveFunction& phi,
                                        double T, const VelocityExperimentSetup& setup,
                                        const std::vector<double>& pp_values);

ExperimentReport middle_bound_integral(const HamiltonianHandle& h, const SmoothCutoff& f,
                                       double theta1, double theta2, const WaveFunction& phi,
                                       double T, const VelocityExperimentSetup& setup,
                                       const std::vector<double>& pp_values);

// Dense norm decay of the expansion remainder
//   [Psi(|D|^2), chi(|x|/(2t))] - [|D|^2, chi(|x|/(2t))] Psi'(|D|^2),
// compressed to the interior block {|x| <= 0.8 L}; least-squares slope of
// log norm vs log t.  chi is evaluated at u = |x|/(2t) >= 0 only, so its
// rising edge may sit at negative arguments (pure radial falloff profile).
struct RemainderDecay {
  std::vector<double> times;
  std::vector<double> norms;
  double slope = 0.0;
  bool at_floor = false;  // every norm below 1e-13: fit not meaningful
};

RemainderDecay commutator_remainder_decay(const GridSpec& grid, const FractionalSymbol& sym,
                                          const SmoothCutoff& chi,
                                          const std::vector<double>& t_list);

// Central-difference Heisenberg derivative of <psi(t), P(t) psi(t)> along a
// uniformly recorded trace (spacing <= 0.1 required).
using ObservableApplier = std::function<WaveFunction(const WaveFunction&, double t)>;

std::vector<std::pair<double, double>> heisenberg_probe(const EvolutionTrace& trace,
                                                        const ObservableApplier& p);

// Multiplication by profile(|x|/(2t)) as an observable applier.
ObservableApplier radial_observable(const std::function<double(double)>& profile);

}  // namespace velobound
