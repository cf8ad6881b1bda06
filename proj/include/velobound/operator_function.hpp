#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "velobound/cutoff.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"

namespace velobound {

using ScalarFn = std::function<double(double)>;

struct SpectralBounds {
  double lo = 0.0, hi = 1.0;
};

// Power-iteration estimate of the spectral interval of H, widened by a 5%
// safety margin.  Shift c = kinetic band top + max|V| keeps both shifted
// operators positive so the iterations converge to the band edges.
SpectralBounds estimate_spectral_bounds(const HamiltonianHandle& h, int iterations = 30,
                                        double margin = 0.05, std::uint64_t seed = 7);

// f(H) applier.  Dense path uses a spectral decomposition exactly; the
// Chebyshev path uses the three-term recurrence with coefficients truncated
// where the absolute tail drops below tail_tol.
class OperatorFunction {
 public:
  static OperatorFunction dense(const GridSpec& grid, const SpectralDecomposition& d,
                                ScalarFn f);
  static OperatorFunction chebyshev(const HamiltonianHandle& h, ScalarFn f,
                                    SpectralBounds bounds, int max_degree = 10000,
                                    double tail_tol = 1e-10);

  WaveFunction apply(const WaveFunction& psi) const;
  int degree() const { return degree_; }
  bool is_dense() const { return dense_ != nullptr; }
  const std::vector<double>& coefficients() const { return coeffs_; }

 private:
  OperatorFunction() = default;
  struct DensePart {
    GridSpec grid;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd fvalues;
  };
  std::shared_ptr<DensePart> dense_;
  std::shared_ptr<HamiltonianHandle> h_;
  SpectralBounds bounds_{};
  std::vector<double> coeffs_;
  int degree_ = 0;
};

// True when every listed point-spectrum value lambda lies outside [lo, hi]
// or has f(lambda) <= 1e-12 — the "supp f avoids sigma_pp" gate.
bool spectrum_avoidance(const SmoothCutoff& f, const std::vector<double>& pp_values);

}  // namespace velobound
