#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>

#include "velobound/rfunction.hpp"

using velobound::RFunction;

TEST_CASE("bisection closes the transition: r(theta^2) = theta^2 / 2 to 1e-12") {
  for (double theta : {0.5, 1.0, 2.0}) {
    const RFunction R(theta);
    const double t2 = theta * theta;
    CHECK(std::abs(R.r(t2) - t2 / 2.0) <= 1e-12);
    // The shift lies strictly inside the admissible bracket.
    CHECK(R.shift() > t2 / 4.0);
    CHECK(R.shift() < 5.0 * t2 / 8.0);
  }
}

TEST_CASE("r branches: flat below the shift, exactly s/2 above theta^2") {
  const RFunction R(1.0);
  CHECK(R.r(0.0) == 0.25);           // theta^2 / 4 exactly
  CHECK(R.r(0.1) == 0.25);
  CHECK(R.r(R.shift()) == 0.25);
  CHECK(R.r(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(R.r(2.0) == 1.0);            // s/2, exact branch
  CHECK(R.r(7.5) == 3.75);
}

TEST_CASE("first and second derivatives stay nonnegative on a dense sample") {
  const RFunction R(1.0);
  for (int i = 0; i < 10000; ++i) {
    const double s = 4.0 * i / 9999.0;
    CHECK(R.r1(s) >= 0.0);
    CHECK(R.r1(s) <= 0.5 + 1e-15);
    CHECK(R.r2(s) >= 0.0);
  }
}

TEST_CASE("r is continuous across both branch points") {
  const RFunction R(1.3);
  const double eps = 1e-7;
  for (double s0 : {R.shift(), R.theta() * R.theta()}) {
    const double below = R.r(s0 - eps);
    const double above = R.r(s0 + eps);
    CHECK(std::abs(above - below) <= 1e-6);
  }
}

TEST_CASE("gradient of R(x) = r(|x|^2) is exactly x beyond theta") {
  const RFunction R(1.0);
  const std::array<double, 3> x{1.2, -0.7, 0.4};  // |x| = 1.45... > theta
  const auto g = R.gradR(x, 3);
  CHECK(g[0] == x[0]);
  CHECK(g[1] == x[1]);
  CHECK(g[2] == x[2]);

  // Inside the flat branch the gradient vanishes.
  const std::array<double, 3> y{0.1, 0.2, 0.0};
  const auto gy = R.gradR(y, 3);
  CHECK(gy[0] == 0.0);
  CHECK(gy[1] == 0.0);
  CHECK(gy[2] == 0.0);
}

TEST_CASE("Hessian quadratic form 4 r''(x.y)^2 + 2 r'|y|^2 is nonnegative") {
  const RFunction R(0.8);
  std::uint64_t state = 88172645463325252ull;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state % 20001) / 10000.0 - 1.0;  // [-1, 1]
  };
  for (int i = 0; i < 2000; ++i) {
    const std::array<double, 3> x{2.0 * next(), 2.0 * next(), 2.0 * next()};
    const std::array<double, 3> y{next(), next(), next()};
    CHECK(R.hessian_form(x, y, 3) >= -1e-15);
  }
}

TEST_CASE("R scales consistently in dimension") {
  const RFunction R(1.0);
  // R(x) depends on x only through |x|^2.
  const std::array<double, 3> a{0.6, 0.8, 0.0};
  const std::array<double, 3> b{1.0, 0.0, 0.0};
  CHECK(R.R(a, 3) == doctest::Approx(R.R(b, 1)).epsilon(1e-13));
}
