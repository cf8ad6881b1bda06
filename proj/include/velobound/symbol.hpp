#pragma once

namespace velobound {

// Kinetic dispersion Psi_rho(s) = (s+1)^rho - 1 on s >= 0, rho in (0,1].
// Psi_rho is smooth, vanishes at 0, increases, and is concave for rho < 1;
// its derivative obeys Psi' = rho / (1+Psi)^((1-rho)/rho), which couples the
// velocity scale to the energy scale and is property-tested to 1e-13.
struct FractionalSymbol {
  double rho = 1.0;

  FractionalSymbol() = default;
  explicit FractionalSymbol(double rho_);

  double value(double s) const;   // Psi_rho(s)
  double deriv1(double s) const;  // rho (s+1)^(rho-1)
  double deriv2(double s) const;  // rho (rho-1) (s+1)^(rho-2)

  // order in {0,1,2}; throws std::domain_error for s < 0 and
  // std::invalid_argument for other orders.
  double eval(double s, int order) const;
};

}  // namespace velobound
