#pragma once

namespace velobound {

// C-infinity step: 0 for u <= 0, 1 for u >= 1, built from w(u) = exp(-1/u) as
// S(u) = w(u) / (w(u) + w(1-u)).  S(u) + S(1-u) = 1.
double smooth_step(double u);

// Smooth bump supported on [a, b] with plateau value 1 on [a1, b1]:
// rises as S((s-a)/(a1-a)), falls as S((b-s)/(b-b1)).  All derivatives vanish
// at the support endpoints.
struct SmoothCutoff {
  double a = 0.0, a1 = 0.0, b1 = 0.0, b = 0.0;

  double value(double s) const;
  double support_lo() const { return a; }
  double support_hi() const { return b; }
};

SmoothCutoff make_bump(double a, double a1, double b1, double b);

}  // namespace velobound
