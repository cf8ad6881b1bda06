#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "velobound/cutoff.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"

namespace velobound {

// Conjugate generators for the commutator positivity checks:
//   weighted:  A = (1/(2 rho)) sum_j { <D>^{2 rho - 2} D_j x_j + x_j D_j <D>^{2 rho - 2} }
//   dilation:  A = (1/(2 rho)) sum_j { D_j x_j + x_j D_j }
// assembled densely from the Fourier-side multiplier matrix M_j and the
// diagonal coordinate matrix X_j, then explicitly symmetrized.  The
// coordinate factor uses affine coordinates on [-L, L), so quadratic-form
// statements made with packet probes are meaningful only for states whose
// mass stays clear of the fold at the box edge.
enum class ConjugateKind { weighted, dilation };

struct ConjugateOperator {
  ConjugateKind kind = ConjugateKind::weighted;
  double rho = 1.0;
  GridSpec grid;
  Eigen::MatrixXcd dense;
  double presym_defect = 0.0;  // max |P - P^H| entry before symmetrization
};

// Dense realization of a real Fourier multiplier (one inverse transform per
// column).  Shared with the commutator-remainder experiment.
Eigen::MatrixXcd dense_multiplier(const GridSpec& grid, const std::vector<double>& table);

ConjugateOperator build_conjugate(const GridSpec& grid, double rho, ConjugateKind kind);

// i (H A - A H), re-Hermitized by averaging with its adjoint.  The
// anti-Hermitian defect of the raw product is written to *defect if given.
Eigen::MatrixXcd commutator_iHA(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& A,
                                double* defect = nullptr);

// Quadratic-form check of the free commutator law
//   <psi, i[H, A_rho] psi> = <psi, 2 (1+|xi|^2)^{2 rho - 2} |xi|^2 psi>
// on interior Gaussian packets.  Returns the maximum relative error.
struct FreeCommutatorCheck {
  struct Row {
    double carrier;    // packet momentum
    double lhs, rhs;   // commutator form vs multiplier form
    double rel_error;
  };
  std::vector<Row> rows;
  double max_rel_error = 0.0;
};

FreeCommutatorCheck free_commutator_identity_check(const HamiltonianHandle& h,
                                                   const ConjugateOperator& a);

// Mourre lower-bound report on the energy window (lambda1, lambda2):
//   c_theory = 2 lambda1 / (1 + lambda2)^{(1-rho)/rho}, the full-window
//   constant; the localized bound is half of it.  The sub-window delta is the
//   central part of the window kept clear of the discrete point-spectrum
//   proxies (negative eigenvalues), and g is a bump supported inside delta.
// observed_min is the exact minimum of
//   <psi, M psi> / <psi, g(H)^2 psi>,   M = g(H) i[H,A] g(H),
// over the spectral subspace spanned by eigenvectors with eigenvalue in the
// sub-window: since g(H) acts diagonally there, the quotient reduces to a
// Rayleigh quotient of i[H,A] and the minimum is the smallest eigenvalue of
// the compressed commutator; rows report each eigenvector's diagonal value.
// In the free case the rows are the exact lattice modes instead: the
// quadratic form of the commutator multiplier evaluated at xi_k, compared
// against the closed form 2 (1+lambda)^{2(rho-1)/rho} ((1+lambda)^{1/rho}-1).
struct MourreReport {
  double rho = 1.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  double c_theory = 0.0;
  double localized_bound = 0.0;
  double delta_lo = 0.0, delta_hi = 0.0;
  SmoothCutoff g;
  bool free_case = false;

  struct Row {
    std::string mode;   // lattice index or probe label
    double lambda;      // energy target
    double qform;       // quadratic-form value
    double bound;       // reference bound for this row
  };
  std::vector<Row> rows;

  double observed_min = 0.0;
  double margin = 0.0;  // observed_min - localized_bound
  int probes_used = 0;
  int probes_skipped = 0;
  double k_min_eigenvalue = 0.0;  // min eig of K = M - c_theory g(H)^2
  double k_norm = 0.0;            // spectral norm of K
};

MourreReport mourre_lower_bound(const HamiltonianHandle& h, const Eigen::MatrixXcd& h_dense,
                                const ConjugateOperator& a, double lambda1, double lambda2,
                                const SpectralDecomposition& decomp,
                                const SmoothCutoff* g_override = nullptr);

// Dilation-generator identity for a purely long-range potential
// a <x>^{-gamma}:  i[H, A] = (2/rho) Psi'(|D|^2) |D|^2 - (1/rho) x.grad V,
// with x.grad V = -a gamma |x|^2 <x>^{-gamma-2} assembled analytically.
// Also evaluates the scalar inequality (2/rho) Psi'(s) s - 2 Psi(s) >= 0
// over the momentum lattice.  The residual of the discrete identity does not
// vanish: sampling the potential aliases at ~e^{-pi/dx} and the coordinate
// fold at the box edge contributes ~1/(dx*L), so expect ~1e-4 at desk scales.
struct DilationCheck {
  double max_residual = 0.0;        // ||(i[H,A] - RHS) psi|| / ||psi|| over probes
  double scalar_min_margin = 0.0;   // min over modes of (2/rho) Psi' s - 2 Psi
};

DilationCheck dilation_commutator_check(const HamiltonianHandle& h, const LongPart& lp);

}  // namespace velobound
