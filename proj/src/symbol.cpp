#include "velobound/symbol.hpp"

#include <cmath>
#include <stdexcept>

namespace velobound {

FractionalSymbol::FractionalSymbol(double rho_) : rho(rho_) {
  if (!(rho > 0.0) || rho > 1.0 || !std::isfinite(rho))
    throw std::invalid_argument("FractionalSymbol: rho must lie in (0, 1]");
}

// expm1/log1p keep full relative precision near s = 0 and for small rho.
// The rho = 1 branch returns s without rounding so that Psi_1(|D|^2) and
// |D|^2 coincide bit-for-bit downstream.
double FractionalSymbol::value(double s) const {
  if (s < 0.0) throw std::domain_error("FractionalSymbol: negative argument");
  if (rho == 1.0) return s;
  return std::expm1(rho * std::log1p(s));
}

double FractionalSymbol::deriv1(double s) const {
  if (s < 0.0) throw std::domain_error("FractionalSymbol: negative argument");
  return rho * std::exp((rho - 1.0) * std::log1p(s));
}

double FractionalSymbol::deriv2(double s) const {
  if (s < 0.0) throw std::domain_error("FractionalSymbol: negative argument");
  return rho * (rho - 1.0) * std::exp((rho - 2.0) * std::log1p(s));
}

double FractionalSymbol::eval(double s, int order) const {
  switch (order) {
    case 0: return value(s);
    case 1: return deriv1(s);
    case 2: return deriv2(s);
    default:
      throw std::invalid_argument("FractionalSymbol: order must be 0, 1 or 2");
  }
}

}  // namespace velobound
