#pragma once

#include <optional>
#include <string>
#include <vector>

#include "velobound/grid.hpp"

namespace velobound {

// V = V_sing + V_short + V_long (+ custom sampled field).
//
// sing : kappa |x|^(-1+epsilon) F(|x| <= cutoff_radius), evaluated with
//        |x| -> max(|x|, mollify_radius) on the grid.
// short: amplitude * <x>^(-gamma_short) (power_law) or a compactly supported
//        smooth bump with plateau |x| <= 1/2 and support |x| <= 1 (bump).
// long : amplitude * <x>^(-gamma_long), C^1 with decaying derivative.
struct SingularPart {
  double kappa = 0.0;
  double epsilon = 0.0;        // in [0,1); 0 is the pure Coulomb-type case
  double cutoff_radius = 1.0;
  double gamma_sing = 1.5;     // weight exponent, > 1
  double mollify_radius = 1e-3;
};

enum class ShortProfile { power_law, bump };

struct ShortPart {
  double amplitude = 0.0;
  double gamma_short = 1.5;  // > 1
  ShortProfile profile = ShortProfile::power_law;
};

struct LongPart {
  double amplitude = 0.0;
  double gamma_long = 1.0;  // > 0
};

struct PotentialSpec {
  std::optional<SingularPart> sing;
  std::optional<ShortPart> short_range;
  std::optional<LongPart> long_range;
  std::optional<std::vector<double>> custom;  // sampled on the target grid

  void validate() const;  // throws std::invalid_argument on violations
  bool empty() const {
    return !sing && !short_range && !long_range && !custom;
  }
};

std::vector<double> sample_potential(const PotentialSpec& spec, const GridSpec& grid);

// L^p condition verdict for the singular part (n-dimensional statement).
struct Admissibility {
  bool admissible = false;
  double p_low = 0.0;    // p range (p_low, p_high); point range when p_point
  double p_high = 0.0;
  bool p_point = false;  // true when the range degenerates to a single p
  std::string reason;
};

Admissibility admissibility_check(const PotentialSpec& spec, double rho, int dim);

// (sum |<x>^gamma field|^p h^dim)^(1/p); requires p >= 1.
double weighted_lp_norm(const GridSpec& grid, const std::vector<double>& field,
                        double gamma, double p);

}  // namespace velobound
