#include "velobound/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "velobound/cutoff.hpp"

namespace velobound {

void PotentialSpec::validate() const {
  if (sing) {
    if (sing->epsilon < 0.0 || sing->epsilon >= 1.0)
      throw std::invalid_argument("potential: sing.epsilon must lie in [0, 1)");
    if (!(sing->cutoff_radius > 0.0))
      throw std::invalid_argument("potential: sing.cutoff_radius must be positive");
    if (!(sing->gamma_sing > 1.0))
      throw std::invalid_argument("potential: sing.gamma_sing must exceed 1");
    if (!(sing->mollify_radius > 0.0))
      throw std::invalid_argument("potential: sing.mollify_radius must be positive");
  }
  if (short_range && !(short_range->gamma_short > 1.0))
    throw std::invalid_argument("potential: short.gamma_short must exceed 1");
  // gamma_long > 0 keeps the long-range tail decaying; growing tails
  // (the Faris-Lavine extension) are out of scope and rejected here.
  if (long_range && !(long_range->gamma_long > 0.0))
    throw std::invalid_argument("potential: long.gamma_long must be positive");
}

namespace {

double radius(const std::array<double, 3>& x, int dim) {
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
  return std::sqrt(r2);
}

double bracket(double r) { return std::sqrt(1.0 + r * r); }  // <x>

}  // namespace

std::vector<double> sample_potential(const PotentialSpec& spec, const GridSpec& grid) {
  spec.validate();
  if (spec.custom && spec.custom->size() != grid.size())
    throw std::invalid_argument("potential: custom field size does not match grid");

  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = grid.coords_of(i);
    const double r = radius(x, grid.dim);
    double val = 0.0;
    if (spec.sing && r <= spec.sing->cutoff_radius) {
      const double rm = std::max(r, spec.sing->mollify_radius);
      val += spec.sing->kappa * std::pow(rm, -1.0 + spec.sing->epsilon);
    }
    if (spec.short_range) {
      if (spec.short_range->profile == ShortProfile::power_law) {
        val += spec.short_range->amplitude *
               std::pow(bracket(r), -spec.short_range->gamma_short);
      } else {
        // Compact bump: plateau for r <= 1/2, smooth roll-off, zero for r >= 1.
        val += spec.short_range->amplitude * smooth_step((1.0 - r) / 0.5);
      }
    }
    if (spec.long_range)
      val += spec.long_range->amplitude *
             std::pow(bracket(r), -spec.long_range->gamma_long);
    if (spec.custom) val += (*spec.custom)[i];
    v[i] = val;
  }
  return v;
}

Admissibility admissibility_check(const PotentialSpec& spec, double rho, int dim) {
  spec.validate();
  if (!(rho > 0.0) || rho > 1.0)
    throw std::invalid_argument("admissibility_check: rho must lie in (0, 1]");
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("admissibility_check: dim must be 1, 2 or 3");

  Admissibility out;
  if (!spec.sing || spec.sing->kappa == 0.0) {
    out.admissible = true;
    out.p_point = true;
    out.p_low = out.p_high = 2.0;
    out.reason = "no singular part";
    return out;
  }

  const double n = dim;
  const double eps = spec.sing->epsilon;
  if (eps == 0.0) {
    // Pure |x|^{-1} singularity.
    if (rho > 0.75 && dim == 3) {
      out.admissible = true;
      out.p_point = true;
      out.p_low = out.p_high = 2.0;
      out.reason = "pure inverse-distance singularity, n=3, 3/4 < rho <= 1: square-integrable";
    } else if (rho > 0.5 && dim >= 3) {
      out.admissible = true;
      out.p_low = n / (2.0 * rho);
      out.p_high = n;
      out.reason = "pure inverse-distance singularity, 1/2 < rho <= 3/4: p in (n/(2 rho), n)";
    } else if (rho > 0.5) {
      out.reason = "pure inverse-distance singularity needs n >= 3";
    } else {
      out.reason = "pure inverse-distance singularity rejected for rho <= 1/2";
      if (rho <= 0.25)
        out.reason += " (p=2 branch unreachable: n < 4 rho has no dimension)";
    }
    return out;
  }

  // Softened singularity |x|^{-1+eps}.
  if (eps > 1.0 - 2.0 * rho) {
    out.admissible = true;
    out.p_low = n / (2.0 * rho);
    out.p_high = n / (1.0 - eps);
    out.reason = "softened singularity: p in (n/(2 rho), n/(1-eps))";
  } else {
    out.reason = "softened singularity requires eps > 1 - 2 rho";
  }
  return out;
}

double weighted_lp_norm(const GridSpec& grid, const std::vector<double>& field,
                        double gamma, double p) {
  if (field.size() != grid.size())
    throw std::invalid_argument("weighted_lp_norm: field size does not match grid");
  if (!(p >= 1.0))
    throw std::invalid_argument("weighted_lp_norm: p must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto x = grid.coords_of(i);
    const double w = std::pow(bracket(radius(x, grid.dim)), gamma);
    s += std::pow(std::abs(w * field[i]), p);
  }
  return std::pow(s * grid.cell_measure(), 1.0 / p);
}

}  // namespace velobound
