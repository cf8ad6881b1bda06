#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "velobound/conjugate.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"
#include "velobound/potential.hpp"
#include "velobound/state.hpp"
#include "velobound/symbol.hpp"

using namespace velobound;

TEST_CASE("conjugate generator is Hermitian with roundoff pre-symmetrization defect") {
  const GridSpec g(1, 32, 8.0);
  const ConjugateOperator a = build_conjugate(g, 0.5, ConjugateKind::weighted);
  CHECK((a.dense - a.dense.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(a.presym_defect <= 1e-9);
}

TEST_CASE("weighted and dilation generators coincide at rho = 1") {
  const GridSpec g(1, 32, 8.0);
  const ConjugateOperator w = build_conjugate(g, 1.0, ConjugateKind::weighted);
  const ConjugateOperator d = build_conjugate(g, 1.0, ConjugateKind::dilation);
  // The weight (1+s)^{rho-1} is identically one at rho = 1.
  CHECK((w.dense - d.dense).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("quadratic form of A vanishes on a centered standing packet") {
  const GridSpec g(1, 64, 16.0);
  const ConjugateOperator a = build_conjugate(g, 0.5, ConjugateKind::weighted);
  const WaveFunction psi = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 2.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = psi.values[i];
  const double form = std::real((v.adjoint() * (a.dense * v))(0, 0)) * g.cell_measure();
  CHECK(std::abs(form) <= 1e-10);
}

TEST_CASE("free commutator identity on interior packets (rho = 0.5, 0.75)") {
  for (double rho : {0.5, 0.75}) {
    const GridSpec g(1, 64, 16.0);
    const HamiltonianHandle h =
        HamiltonianHandle::make(g, FractionalSymbol(rho), PotentialSpec{});
    const ConjugateOperator a = build_conjugate(g, rho, ConjugateKind::weighted);
    const FreeCommutatorCheck fc = free_commutator_identity_check(h, a);
    REQUIRE(fc.rows.size() >= 5);
    CHECK(fc.max_rel_error <= 1e-6);
  }
}

TEST_CASE("commutator i[H, A] is Hermitian after re-symmetrization") {
  const GridSpec g(1, 32, 8.0);
  PotentialSpec pot;
  pot.long_range = LongPart{0.05, 1.0};
  const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(0.5), pot);
  const ConjugateOperator a = build_conjugate(g, 0.5, ConjugateKind::weighted);
  double defect = -1.0;
  const Eigen::MatrixXcd m = commutator_iHA(assemble_dense(h), a.dense, &defect);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(defect >= 0.0);
  CHECK(defect <= 1e-8);
}

TEST_CASE("free Mourre report evaluates lattice modes against the closed form") {
  const GridSpec g(1, 64, 32.0);
  const HamiltonianHandle h =
      HamiltonianHandle::make(g, FractionalSymbol(0.5), PotentialSpec{});
  const Eigen::MatrixXcd hd = assemble_dense(h);
  const SpectralDecomposition d = diagonalize(hd);
  const ConjugateOperator a = build_conjugate(g, 0.5, ConjugateKind::weighted);

  const MourreReport rep = mourre_lower_bound(h, hd, a, 1.0, 2.0, d);
  CHECK(rep.free_case);
  // c_theory = 2 lambda1 / (1 + lambda2)^{(1-rho)/rho} = 2/3 exactly.
  CHECK(std::abs(rep.c_theory - 2.0 / 3.0) <= 1e-15);
  CHECK(rep.localized_bound == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rep.delta_lo > 1.0);
  CHECK(rep.delta_hi < 2.0);
  REQUIRE(!rep.rows.empty());
  for (const auto& row : rep.rows) {
    // Row values match the closed form to 1e-6 relative and dominate c_theory.
    CHECK(std::abs(row.qform - row.bound) <= 1e-6 * std::abs(row.bound));
    CHECK(row.qform >= rep.c_theory - 1e-9);
  }
  CHECK(rep.margin >= 0.0);
}

TEST_CASE("Mourre lower bound with a shallow long-range potential") {
  const GridSpec g(1, 128, 32.0);
  PotentialSpec pot;
  pot.long_range = LongPart{0.05, 1.0};
  const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(0.5), pot);
  const Eigen::MatrixXcd hd = assemble_dense(h);
  const SpectralDecomposition d = diagonalize(hd);
  const ConjugateOperator a = build_conjugate(g, 0.5, ConjugateKind::weighted);

  const MourreReport rep = mourre_lower_bound(h, hd, a, 1.0, 2.0, d);
  CHECK_FALSE(rep.free_case);
  CHECK(rep.probes_used >= 1);
  CHECK(rep.observed_min >= rep.localized_bound - 0.05);
  CHECK(rep.margin == doctest::Approx(rep.observed_min - rep.localized_bound));
}

TEST_CASE("invalid energy windows are rejected") {
  const GridSpec g(1, 64, 16.0);
  const HamiltonianHandle h =
      HamiltonianHandle::make(g, FractionalSymbol(0.5), PotentialSpec{});
  const Eigen::MatrixXcd hd = assemble_dense(h);
  const SpectralDecomposition d = diagonalize(hd);
  const ConjugateOperator a = build_conjugate(g, 0.5, ConjugateKind::weighted);
  // Windows must satisfy 0 < lambda1 < lambda2.
  CHECK_THROWS_AS(mourre_lower_bound(h, hd, a, -0.5, 1.0, d), std::invalid_argument);
  CHECK_THROWS_AS(mourre_lower_bound(h, hd, a, 2.0, 1.0, d), std::invalid_argument);
  // A window above the lattice band contains no spectrum at all.
  CHECK_THROWS_AS(mourre_lower_bound(h, hd, a, 500.0, 600.0, d), std::invalid_argument);
}

TEST_CASE("dilation commutator identity for a purely long-range potential") {
  const GridSpec g(1, 256, 32.0);
  PotentialSpec pot;
  pot.long_range = LongPart{0.05, 1.0};
  const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(0.5), pot);
  const DilationCheck dc = dilation_commutator_check(h, *pot.long_range);
  // The discrete identity carries two floors: sampled-potential aliasing
  // (~e^{-pi/dx}) and the coordinate-fold commutator error (~1/(dx*L)).
  // At dx = 0.25, L = 32 the measured residual is 5.7e-5; a wiring error in
  // either side of the identity would show up at O(0.1).
  CHECK(dc.max_residual <= 2e-4);
  // (2/rho) Psi'(s) s - 2 Psi(s) >= 0 over the lattice, with equality at 0.
  CHECK(dc.scalar_min_margin >= -1e-15);

  PotentialSpec mixed = pot;
  mixed.short_range = ShortPart{-0.5, 1.5, ShortProfile::bump};
  const HamiltonianHandle hm = HamiltonianHandle::make(g, FractionalSymbol(0.5), mixed);
  CHECK_THROWS_AS(dilation_commutator_check(hm, *pot.long_range), std::invalid_argument);
}
