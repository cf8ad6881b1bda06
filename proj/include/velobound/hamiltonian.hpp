#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "velobound/grid.hpp"
#include "velobound/potential.hpp"
#include "velobound/spectral_ops.hpp"
#include "velobound/symbol.hpp"

namespace velobound {

// H = Psi_rho(|D|^2) + V on the periodic grid.  The kinetic multiplier table
// is cached at construction; apply() costs two transforms.
struct HamiltonianHandle {
  GridSpec grid;
  FractionalSymbol symbol;
  std::vector<double> potential;  // sampled, position order
  std::vector<double> kinetic;    // Psi(|xi|^2), FFT order

  static HamiltonianHandle make(const GridSpec& grid, const FractionalSymbol& sym,
                                const PotentialSpec& pot);
  static HamiltonianHandle make(const GridSpec& grid, const FractionalSymbol& sym,
                                std::vector<double> potential_field);

  WaveFunction apply(const WaveFunction& psi) const;
  double kinetic_band_top() const;   // max over lattice of Psi(|xi|^2)
  double potential_max_abs() const;
  bool potential_is_zero() const;
};

// Dense realization in the grid point basis (row-major flattening).  Requires
// N^dim <= 4096; verifies the Hermiticity defect <= 1e-12 relative.
Eigen::MatrixXcd assemble_dense(const HamiltonianHandle& h);

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns, orthonormal in counting measure
  double orthonormality_defect = 0.0;  // max |U^H U - I|
  double residual = 0.0;               // max_j ||H v_j - lambda_j v_j||_2
};

// Throws std::runtime_error (with the residual) if the solver fails to meet
// the orthonormality (1e-10) or residual (1e-9 * ||H||) guarantees.
SpectralDecomposition diagonalize(const Eigen::MatrixXcd& H);

// Column j as a grid wave function, normalized in the h^dim measure.
WaveFunction eigenvector_state(const GridSpec& grid, const SpectralDecomposition& d, int j);

// Kato-style relative-bound probe: for each delta, low-pass every probe state
// with the (1 + delta Psi(|D|^2))^{-1} factor and report
//   C_eff(delta)      = max_phi ||V_sing phi_low|| / ||phi||
//   epsilon_eff(delta)= max_phi max(0, ||V_sing phi|| - C_eff ||phi||)
//                                 / ||Psi(|D|^2) phi||,
// so ||V phi|| <= epsilon_eff ||Psi phi|| + C_eff ||phi|| for every probe.
// epsilon_eff -> 0 as delta decreases (the high-pass threshold ~1/delta
// grows and the low-pass factor tends to the identity).
struct RelativeBoundPoint {
  double delta;
  double epsilon_eff;
  double c_eff;
};

std::vector<RelativeBoundPoint> relative_bound_probe(const HamiltonianHandle& h,
                                                     const std::vector<double>& sing_field,
                                                     const std::vector<double>& deltas,
                                                     std::uint64_t seed = 2026);

/// Admissibility-gated variant: rejects an inadmissible singular part (per the
// L^p rules) before sampling it on the grid.
std::vector<RelativeBoundPoint> relative_bound_probe(const HamiltonianHandle& h,
                                                     const SingularPart& sing,
                                                     const std::vector<double>& deltas,
                                                     std::uint64_t seed = 2026);

/// Discrete point-spectrum shadow: negative eigenvalues (below the essential
// floor 0 of the kinetic band) inside the window, matched across a grid
// refinement; positive refinement-stable isolated values are flagged as
// embedded candidates rather than counted.
struct PointSpectrumReport {
  double window_lo = 0.0, window_hi = 0.0;
  struct BoundState {
    double lambda_coarse, lambda_fine, drift;  // drift relative to coarse
  };
  std::vector<BoundState> matched;
  int unmatched_coarse = 0, unmatched_fine = 0;
  std::vector<double> gaps;                 // consecutive gaps, fine bound set
  std::vector<double> embedded_candidates;  // fine eigenvalues
  bool band_edge_flag = false;  // window touches the grid kinetic band edge
};

PointSpectrumReport point_spectrum_report(const HamiltonianHandle& h_coarse,
                                          const SpectralDecomposition& coarse,
                                          const HamiltonianHandle& h_fine,
                                          const SpectralDecomposition& fine,
                                          double window_lo, double window_hi);

// Binary dense-matrix file: 8-byte magic "VBHMAT01", then row-major
// little-endian float64 interleaved (re, im).  Square size inferred on read.
void write_dense_matrix(const std::string& path, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_dense_matrix(const std::string& path);

}  // namespace velobound
