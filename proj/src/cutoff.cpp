#include "velobound/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace velobound {

namespace {
double wexp(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double w0 = wexp(u), w1 = wexp(1.0 - u);
  return w0 / (w0 + w1);
}

double SmoothCutoff::value(double s) const {
  if (s <= a || s >= b) return 0.0;
  if (s >= a1 && s <= b1) return 1.0;
  if (s < a1) return smooth_step((s - a) / (a1 - a));
  return smooth_step((b - s) / (b - b1));
}

SmoothCutoff make_bump(double a, double a1, double b1, double b) {
  if (!(a < a1 && a1 <= b1 && b1 < b))
    throw std::invalid_argument("make_bump: need a < a1 <= b1 < b");
  return SmoothCutoff{a, a1, b1, b};
}

}  // namespace velobound
