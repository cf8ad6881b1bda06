#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "velobound/cutoff.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"
#include "velobound/operator_function.hpp"
#include "velobound/potential.hpp"
#include "velobound/state.hpp"
#include "velobound/symbol.hpp"

using namespace velobound;

namespace {

HamiltonianHandle make_well(int n, double L) {
  PotentialSpec spec;
  spec.short_range = ShortPart{-0.5, 1.5, ShortProfile::bump};
  return HamiltonianHandle::make(GridSpec(1, n, L), FractionalSymbol(0.5), spec);
}

}  // namespace

TEST_CASE("power-iteration bounds enclose the dense spectrum") {
  const HamiltonianHandle h = make_well(64, 8.0);
  const SpectralDecomposition d = diagonalize(assemble_dense(h));
  const SpectralBounds b = estimate_spectral_bounds(h);
  CHECK(b.lo <= d.eigenvalues[0]);
  CHECK(b.hi >= d.eigenvalues[d.eigenvalues.size() - 1]);
}

TEST_CASE("Chebyshev filter agrees with the dense functional calculus") {
  const HamiltonianHandle h = make_well(64, 8.0);
  const SpectralDecomposition d = diagonalize(assemble_dense(h));
  const SmoothCutoff f = make_bump(0.2, 0.4, 0.8, 1.0);
  const auto fn = [&](double s) { return f.value(s); };

  const OperatorFunction dense = OperatorFunction::dense(h.grid, d, fn);
  const OperatorFunction cheb =
      OperatorFunction::chebyshev(h, fn, estimate_spectral_bounds(h));
  CHECK(dense.is_dense());
  CHECK_FALSE(cheb.is_dense());
  CHECK(cheb.degree() > 8);

  const WaveFunction psi = random_band_limited(h.grid, 12.0, 3);
  const WaveFunction a = dense.apply(psi);
  const WaveFunction c = cheb.apply(psi);
  CHECK((a - c).norm() <= 1e-8);
  // A bump filter is a contraction.
  CHECK(a.norm() <= psi.norm() + 1e-10);
}

TEST_CASE("dense path with f = 1 is the identity") {
  const HamiltonianHandle h = make_well(32, 8.0);
  const SpectralDecomposition d = diagonalize(assemble_dense(h));
  const OperatorFunction one = OperatorFunction::dense(h.grid, d, [](double) { return 1.0; });
  const WaveFunction psi = random_band_limited(h.grid, 6.0, 5);
  CHECK((one.apply(psi) - psi).norm() <= 1e-9);
}

TEST_CASE("recurrence detects bounds that do not enclose the spectrum") {
  const HamiltonianHandle h = make_well(64, 8.0);
  const SmoothCutoff f = make_bump(0.2, 0.4, 0.8, 1.0);
  // Deliberately too-narrow bounds: the shifted operator has norm > 1 and the
  // Chebyshev iterates blow up.
  const SpectralBounds bad{-0.1, 0.5};
  const OperatorFunction cheb =
      OperatorFunction::chebyshev(h, [&](double s) { return f.value(s); }, bad);
  const WaveFunction psi = random_band_limited(h.grid, 12.0, 9);
  CHECK_THROWS_AS(cheb.apply(psi), std::runtime_error);
}

TEST_CASE("spectrum avoidance gate") {
  const SmoothCutoff f = make_bump(1.0, 1.2, 1.8, 2.0);
  CHECK(spectrum_avoidance(f, {}));
  CHECK(spectrum_avoidance(f, {0.5, 2.5}));     // outside the support
  CHECK(spectrum_avoidance(f, {1.0 - 1e-9}));   // at the edge, f vanishes
  CHECK_FALSE(spectrum_avoidance(f, {1.5}));    // on the plateau
  CHECK_FALSE(spectrum_avoidance(f, {0.5, 1.5}));
}
