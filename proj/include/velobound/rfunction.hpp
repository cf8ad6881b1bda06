#pragma once

#include <array>

namespace velobound {

// Convex radial localizer R(x) = r(|x|^2).  The scalar profile r is
//   r(s) = theta^2/4          for s <= m,
//   r(s) = s/2                for s >= theta^2 (exactly, by branch),
// joined by r'(s) = (1/2) S((s - m)/w) with the smooth step S and width
// w = 3 theta^2 / 8.  The shift m is solved by bisection inside
// [theta^2/4, 5 theta^2/8] so that the transition integral closes the
// profile continuously: |r(theta^2) - theta^2/2| <= 1e-12.
// Consequences: r' in [0, 1/2] nondecreasing, r'' >= 0, grad R(x) = x
// exactly for |x| > theta, and the Hessian quadratic form
//   y . (Hess R)(x) y = 4 r''(|x|^2) (x.y)^2 + 2 r'(|x|^2) |y|^2 >= 0.
class RFunction {
 public:
  explicit RFunction(double theta);

  double theta() const { return theta_; }
  double shift() const { return m_; }
  double width() const { return w_; }

  double r(double s) const;
  double r1(double s) const;  // r'
  double r2(double s) const;  // r''

  double R(const std::array<double, 3>& x, int dim) const;
  std::array<double, 3> gradR(const std::array<double, 3>& x, int dim) const;
  // y . (Hess R)(x) y
  double hessian_form(const std::array<double, 3>& x, const std::array<double, 3>& y,
                      int dim) const;

 private:
  double transition_integral(double upto) const;  // int_m^upto r'

  double theta_ = 1.0;
  double m_ = 0.0;
  double w_ = 0.0;
};

}  // namespace velobound
