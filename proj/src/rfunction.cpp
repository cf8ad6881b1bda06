#include "velobound/rfunction.hpp"

#include <cmath>
#include <stdexcept>

#include "velobound/cutoff.hpp"
#include "velobound/quadrature.hpp"

namespace velobound {

namespace {

// d/du of the smooth step S(u) = w(u)/(w(u)+w(1-u)), w(u) = exp(-1/u).
double smooth_step_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double wa = std::exp(-1.0 / u);
  const double wb = std::exp(-1.0 / (1.0 - u));
  const double da = wa / (u * u);
  const double db = wb / ((1.0 - u) * (1.0 - u));
  const double denom = wa + wb;
  return (da * wb + wa * db) / (denom * denom);
}

}  // namespace

RFunction::RFunction(double theta) : theta_(theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("RFunction: theta must be positive and finite");
  const double t2 = theta * theta;
  w_ = 3.0 * t2 / 8.0;

  // Bisect the shift m so the profile closes continuously at s = theta^2:
  //   theta^2/4 + int_m^{theta^2} r'(u) du = theta^2/2.
  // closure(m) is decreasing in m; the bracket endpoints have opposite sign.
  auto closure = [&](double m) {
    m_ = m;
    return t2 / 4.0 + transition_integral(t2) - t2 / 2.0;
  };
  double lo = t2 / 4.0, hi = 5.0 * t2 / 8.0;
  double flo = closure(lo);
  double fhi = closure(hi);
  if (!(flo >= 0.0 && fhi <= 0.0))
    throw std::runtime_error("RFunction: bisection bracket invalid");
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = closure(mid);
    if (std::abs(fm) <= 0.25e-12) {
      lo = hi = mid;
      break;
    }
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  m_ = 0.5 * (lo + hi);
  if (std::abs(closure(m_)) > 1e-12)
    throw std::runtime_error("RFunction: continuity closure exceeds 1e-12");
}

double RFunction::transition_integral(double upto) const {
  const double hi = std::min(upto, m_ + w_);
  if (hi <= m_) return 0.0;
  double integral = adaptive_simpson(
      [&](double u) { return 0.5 * smooth_step((u - m_) / w_); }, m_, hi, 1e-15);
  if (upto > m_ + w_) integral += 0.5 * (upto - (m_ + w_));
  return integral;
}

double RFunction::r(double s) const {
  const double t2 = theta_ * theta_;
  if (s >= t2) return 0.5 * s;
  if (s <= m_) return 0.25 * t2;
  return 0.25 * t2 + transition_integral(s);
}

double RFunction::r1(double s) const {
  if (s <= m_) return 0.0;
  if (s >= m_ + w_) return 0.5;
  return 0.5 * smooth_step((s - m_) / w_);
}

double RFunction::r2(double s) const {
  if (s <= m_ || s >= m_ + w_) return 0.0;
  return 0.5 * smooth_step_deriv((s - m_) / w_) / w_;
}

double RFunction::R(const std::array<double, 3>& x, int dim) const {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += x[d] * x[d];
  return r(s);
}

std::array<double, 3> RFunction::gradR(const std::array<double, 3>& x, int dim) const {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += x[d] * x[d];
  // grad r(|x|^2) = 2 r'(|x|^2) x; for |x| > theta the factor 2 r' is the
  // exact constant 1, so grad R(x) = x with no rounding.
  const double factor = (s >= m_ + w_) ? 1.0 : 2.0 * r1(s);
  std::array<double, 3> g{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) g[d] = (factor == 1.0) ? x[d] : factor * x[d];
  return g;
}

double RFunction::hessian_form(const std::array<double, 3>& x,
                               const std::array<double, 3>& y, int dim) const {
  double s = 0.0, xy = 0.0, yy = 0.0;
  for (int d = 0; d < dim; ++d) {
    s += x[d] * x[d];
    xy += x[d] * y[d];
    yy += y[d] * y[d];
  }
  return 4.0 * r2(s) * xy * xy + 2.0 * r1(s) * yy;
}

}  // namespace velobound
