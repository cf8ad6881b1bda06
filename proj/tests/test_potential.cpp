#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "velobound/grid.hpp"
#include "velobound/potential.hpp"
#include "velobound/quadrature.hpp"

using namespace velobound;

TEST_CASE("long-range part samples a <x>^{-gamma}") {
  const GridSpec g(1, 64, 8.0);
  PotentialSpec spec;
  spec.long_range = LongPart{0.5, 2.0};
  const auto v = sample_potential(spec, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coords_of(i)[0];
    CHECK(v[i] == doctest::Approx(0.5 / (1.0 + x * x)).epsilon(1e-13));
  }
}

TEST_CASE("short-range bump has a plateau and compact support") {
  const GridSpec g(1, 256, 4.0);
  PotentialSpec spec;
  spec.short_range = ShortPart{-1.0, 1.5, ShortProfile::bump};
  const auto v = sample_potential(spec, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::abs(g.coords_of(i)[0]);
    if (r <= 0.5) CHECK(v[i] == doctest::Approx(-1.0).epsilon(1e-12));
    if (r >= 1.0) CHECK(v[i] == 0.0);
    CHECK(v[i] <= 1e-15);
    CHECK(v[i] >= -1.0 - 1e-15);
  }
}

TEST_CASE("singular part is mollified at the origin and cut off at radius") {
  const GridSpec g(1, 128, 4.0);
  PotentialSpec spec;
  spec.sing = SingularPart{2.0, 0.5, 1.0, 1.5, 1e-2};
  const auto v = sample_potential(spec, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::abs(g.coords_of(i)[0]);
    if (r > 1.0) {
      CHECK(v[i] == 0.0);
    } else {
      const double reff = std::max(r, 1e-2);
      CHECK(v[i] == doctest::Approx(2.0 * std::pow(reff, -0.5)).epsilon(1e-12));
    }
  }
}

TEST_CASE("potential validation rejects out-of-range parameters") {
  PotentialSpec bad_eps;
  bad_eps.sing = SingularPart{1.0, 1.0, 1.0, 1.5, 1e-3};  // epsilon must be < 1
  CHECK_THROWS_AS(bad_eps.validate(), std::invalid_argument);

  PotentialSpec bad_gamma;
  bad_gamma.short_range = ShortPart{1.0, 1.0, ShortProfile::power_law};  // gamma_short > 1
  CHECK_THROWS_AS(bad_gamma.validate(), std::invalid_argument);

  PotentialSpec bad_long;
  bad_long.long_range = LongPart{1.0, 0.0};  // gamma_long > 0
  CHECK_THROWS_AS(bad_long.validate(), std::invalid_argument);
}

TEST_CASE("admissibility verdicts for the reference singular scenarios") {
  PotentialSpec spec;
  spec.sing = SingularPart{1.0, 0.0, 1.0, 1.5, 1e-3};

  SUBCASE("pure inverse distance, n=3, rho=0.8: admissible at exactly p=2") {
    const Admissibility a = admissibility_check(spec, 0.8, 3);
    CHECK(a.admissible);
    CHECK(a.p_point);
    CHECK(a.p_low == 2.0);
    CHECK(a.p_high == 2.0);
  }
  SUBCASE("pure inverse distance, n=3, rho=0.6: admissible for p in (2.5, 3)") {
    const Admissibility a = admissibility_check(spec, 0.6, 3);
    CHECK(a.admissible);
    CHECK_FALSE(a.p_point);
    CHECK(a.p_low == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(a.p_high == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("softened singularity, eps=0.5, rho=0.3, n=1: admissible, p in (5/3, 2)") {
    spec.sing->epsilon = 0.5;
    const Admissibility a = admissibility_check(spec, 0.3, 1);
    CHECK(a.admissible);
    CHECK(a.p_low == doctest::Approx(1.0 / 0.6).epsilon(1e-15));
    CHECK(a.p_high == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("pure inverse distance needs rho > 1/2") {
    const Admissibility a = admissibility_check(spec, 0.5, 3);
    CHECK_FALSE(a.admissible);
  }
  SUBCASE("pure inverse distance needs n >= 3 on the middle branch") {
    const Admissibility a = admissibility_check(spec, 0.6, 1);
    CHECK_FALSE(a.admissible);
  }
  SUBCASE("rho <= 1/4 names the unreachable p=2 branch") {
    const Admissibility a = admissibility_check(spec, 0.2, 3);
    CHECK_FALSE(a.admissible);
    CHECK(a.reason.find("p=2 branch unreachable") != std::string::npos);
  }
  SUBCASE("softened threshold is monotone in eps: admissible iff eps > 1 - 2 rho") {
    const double rho = 0.3;  // threshold eps = 0.4
    for (double eps : {0.1, 0.2, 0.3, 0.39}) {
      spec.sing->epsilon = eps;
      CHECK_FALSE(admissibility_check(spec, rho, 1).admissible);
    }
    for (double eps : {0.41, 0.5, 0.7, 0.9}) {
      spec.sing->epsilon = eps;
      CHECK(admissibility_check(spec, rho, 1).admissible);
    }
  }
  SUBCASE("no singular part is trivially admissible at p=2") {
    PotentialSpec none;
    const Admissibility a = admissibility_check(none, 0.5, 1);
    CHECK(a.admissible);
    CHECK(a.p_point);
  }
}

TEST_CASE("weighted Lp norm against an adaptive-Simpson integral oracle") {
  // Field <x>^{-2} with weight gamma = 1, p = 2:
  //   ||<x> f||_2^2 = Int (<x>^{1} <x>^{-2})^2 dx = Int <x>^{-2} dx over [-L, L).
  const GridSpec g(1, 512, 16.0);
  std::vector<double> field(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coords_of(i)[0];
    field[i] = 1.0 / (1.0 + x * x);
  }
  const double grid_norm = weighted_lp_norm(g, field, 1.0, 2.0);
  const double integral = adaptive_simpson(
      [](double x) { return 1.0 / (1.0 + x * x); }, -16.0, 16.0, 1e-12);
  CHECK(grid_norm == doctest::Approx(std::sqrt(integral)).epsilon(1e-3));

  CHECK_THROWS_AS(weighted_lp_norm(g, field, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(weighted_lp_norm(g, std::vector<double>(3, 0.0), 1.0, 2.0),
                  std::invalid_argument);
}
