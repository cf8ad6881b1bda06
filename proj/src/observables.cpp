#include "velobound/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "velobound/conjugate.hpp"
#include "velobound/operator_function.hpp"
#include "velobound/spectral_ops.hpp"

namespace velobound {

namespace {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double radial_speed(const std::array<double, 3>& x, int dim, double t) {
  double r2 = 0.0;
  for (int d = 0; d < dim; ++d) r2 += x[d] * x[d];
  return std::sqrt(r2) / (2.0 * t);
}

// Shared quadrature loop.  integrand(t, psi_t) supplies the row value.
ExperimentReport run_quadrature(const std::vector<double>& nodes, const Evolution& evolve,
                                const std::function<double(double, const WaveFunction&)>& integrand) {
  ExperimentReport rep;
  double cumulative = 0.0;
  double prev_t = 0.0, prev_val = 0.0;
  bool have_prev = false;
  for (double t : nodes) {
    const WaveFunction psi_t = evolve(t);
    const double boundary = psi_t.boundary_mass();
    if (boundary > 1e-8) {
      rep.flagged = true;
      std::ostringstream os;
      os << "boundary mass " << boundary << " exceeds 1e-8 at t=" << format_g(t);
      rep.flag_reason = os.str();
      break;
    }
    const double value = integrand(t, psi_t);
    if (!std::isfinite(value)) {
      rep.flagged = true;
      rep.flag_reason = "non-finite integrand at t=" + format_g(t);
      break;
    }
    if (have_prev) cumulative += 0.5 * (value + prev_val) * (std::log(t) - std::log(prev_t));
    rep.rows.push_back({t, value, cumulative, boundary});
    prev_t = t;
    prev_val = value;
    have_prev = true;
  }
  return rep;
}

void common_metadata(ExperimentReport& rep, const HamiltonianHandle& h,
                     const SmoothCutoff& f, const VelocityExperimentSetup& setup,
                     const std::string& kind, double T) {
  rep.metadata.emplace_back("kind", kind);
  rep.metadata.emplace_back("rho", format_g(h.symbol.rho));
  rep.metadata.emplace_back("potential", setup.potential_id);
  rep.metadata.emplace_back("dim", std::to_string(h.grid.dim));
  rep.metadata.emplace_back("n_points", std::to_string(h.grid.n_points));
  rep.metadata.emplace_back("half_width", format_g(h.grid.half_width));
  rep.metadata.emplace_back("f", format_g(f.a) + "," + format_g(f.a1) + "," +
                                     format_g(f.b1) + "," + format_g(f.b));
  rep.metadata.emplace_back("T", format_g(T));
}

void check_preconditions(const HamiltonianHandle& h, const SmoothCutoff& f,
                         const WaveFunction& phi, double T,
                         const std::vector<double>& pp_values,
                         const BandKinematics& kin, const char* kind) {
  if (!(phi.grid == h.grid))
    throw std::invalid_argument(std::string(kind) + ": state grid does not match");
  if (std::abs(phi.norm() - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(kind) + ": phi must be normalized");
  if (!(T > 1.0)) throw std::invalid_argument(std::string(kind) + ": require T > 1");
  if (!spectrum_avoidance(f, pp_values))
    throw std::invalid_argument(std::string(kind) +
                                ": precondition violated: supp f meets the point spectrum");
  if (kin.modes == 0)
    throw std::invalid_argument(std::string(kind) +
                                ": supp f contains no lattice mode energy");
  if (h.grid.half_width < 2.0 * kin.v_max * T) {
    std::ostringstream os;
    os << kind << ": precondition violated: horizon half_width >= 2 v_max T requires "
       << format_g(2.0 * kin.v_max * T) << ", got " << format_g(h.grid.half_width);
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

void VelocityWindow::validate() const {
  if (!(theta_low >= 0.0) || !(theta_high > theta_low))
    throw std::invalid_argument("VelocityWindow: require 0 <= theta_low < theta_high");
  if (smooth && !(width > 0.0))
    throw std::invalid_argument("VelocityWindow: smooth window needs a positive width");
}

std::vector<double> radial_cutoff_field(const GridSpec& grid, double t,
                                        const VelocityWindow& window) {
  window.validate();
  if (!(t > 0.0)) throw std::invalid_argument("radial_cutoff_field: require t > 0");
  std::vector<double> field(grid.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = radial_speed(grid.coords_of(i), grid.dim, t);
    if (window.smooth) {
      double w = 1.0;
      if (window.theta_low > 0.0) w *= smooth_step((v - window.theta_low) / window.width);
      if (std::isfinite(window.theta_high))
        w *= smooth_step((window.theta_high - v) / window.width);
      field[i] = w;
    } else {
      field[i] = (v >= window.theta_low && v < window.theta_high) ? 1.0 : 0.0;
    }
  }
  return field;
}

std::vector<WaveFunction> flux_deviation(const WaveFunction& psi,
                                         const FractionalSymbol& sym, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("flux_deviation: require t > 0");
  std::vector<WaveFunction> out;
  for (int axis = 0; axis < psi.grid.dim; ++axis) {
    WaveFunction dev = apply_multiplier(psi, kinetic_velocity_table(psi.grid, sym, axis));
    for (std::size_t i = 0; i < dev.values.size(); ++i) {
      const double xj = psi.grid.coords_of(i)[axis];
      dev.values[i] -= (xj / (2.0 * t)) * psi.values[i];
    }
    dev.cached_norm.reset();
    out.push_back(std::move(dev));
  }
  return out;
}

std::vector<double> schedule_nodes(double t_min, double t_max, int per_decade,
                                   std::vector<double> extras) {
  if (!(t_min > 0.0 && t_max >= t_min))
    throw std::invalid_argument("schedule_nodes: require 0 < t_min <= t_max");
  if (per_decade < 1) throw std::invalid_argument("schedule_nodes: per_decade >= 1");
  std::vector<double> nodes;
  const int i0 = static_cast<int>(std::ceil(per_decade * std::log10(t_min) - 1e-9));
  for (int i = i0;; ++i) {
    const double t = std::pow(10.0, static_cast<double>(i) / per_decade);
    if (t > t_max * (1.0 + 1e-12)) break;
    nodes.push_back(std::min(t, t_max));
  }
  nodes.push_back(t_min);
  nodes.push_back(t_max);
  for (double e : extras) {
    if (e < t_min || e > t_max)
      throw std::invalid_argument("schedule_nodes: extra node outside [t_min, t_max]");
    nodes.push_back(e);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12 * a; }),
              nodes.end());
  return nodes;
}

double ExperimentReport::cumulative_at(double t) const {
  for (const auto& row : rows)
    if (std::abs(row.t - t) <= 1e-9 * t) return row.cumulative;
  throw std::invalid_argument("ExperimentReport: time " + format_g(t) + " was not recorded");
}

BandKinematics band_kinematics(const GridSpec& grid, const FractionalSymbol& sym,
                               const SmoothCutoff& f) {
  BandKinematics kin;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto xi = grid.momentum_of(k);
    double s = 0.0;
    for (int d = 0; d < grid.dim; ++d) s += xi[d] * xi[d];
    const double lambda = sym.value(s);
    if (lambda < f.support_lo() || lambda > f.support_hi()) continue;
    const double speed = 2.0 * std::sqrt(s) * sym.deriv1(s);
    kin.v_min = std::min(kin.v_min, speed);
    kin.v_max = std::max(kin.v_max, speed);
    ++kin.modes;
  }
  return kin;
}

PreparedState prepare_filtered_evolution(const HamiltonianHandle& h, const SmoothCutoff& f,
                                         const WaveFunction& phi,
                                         const VelocityExperimentSetup& setup) {
  PreparedState out;
  switch (setup.backend) {
    case VelocityExperimentSetup::Backend::multiplier: {
      if (!h.potential_is_zero())
        throw std::invalid_argument(
            "prepare_filtered_evolution: multiplier backend requires V = 0");
      std::vector<double> table(h.kinetic.size());
      for (std::size_t k = 0; k < table.size(); ++k) table[k] = f.value(h.kinetic[k]);
      out.filtered = apply_multiplier(phi, table);
      out.evolve = make_multiplier_evolution(h, out.filtered);
      out.backend_name = "multiplier";
      break;
    }
    case VelocityExperimentSetup::Backend::dense: {
      if (!setup.decomp)
        throw std::invalid_argument(
            "prepare_filtered_evolution: dense backend needs a decomposition");
      const OperatorFunction fh = OperatorFunction::dense(
          h.grid, *setup.decomp, [&](double s) { return f.value(s); });
      out.filtered = fh.apply(phi);
      out.evolve = make_dense_evolution(h, *setup.decomp, out.filtered);
      out.backend_name = "dense";
      break;
    }
    case VelocityExperimentSetup::Backend::split_step: {
      const SpectralBounds bounds = estimate_spectral_bounds(h);
      const OperatorFunction fh = OperatorFunction::chebyshev(
          h, [&](double s) { return f.value(s); }, bounds);
      out.filtered = fh.apply(phi);
      out.evolve = make_split_step_evolution(h, out.filtered, setup.dt);
      out.backend_name = "split_step";
      break;
    }
  }
  return out;
}

ExperimentReport minimal_bound_integral(const HamiltonianHandle& h, const SmoothCutoff& f,
                                        double theta0, const WaveFunction& phi, double T,
                                        const VelocityExperimentSetup& setup,
                                        const std::vector<double>& pp_values) {
  if (!(theta0 >= 0.0))
    throw std::invalid_argument("minimal_bound_integral: theta0 must be nonnegative");
  const BandKinematics kin = band_kinematics(h.grid, h.symbol, f);
  check_preconditions(h, f, phi, T, pp_values, kin, "minimal_bound_integral");

  PreparedState st = prepare_filtered_evolution(h, f, phi, setup);
  const VelocityWindow window{0.0, theta0 > 0.0 ? theta0 : 1e-300, false, 0.0};
  const auto nodes = schedule_nodes(1.0, 2.0 * T, 16, {T, 2.0 * T});
  ExperimentReport rep = run_quadrature(nodes, st.evolve, [&](double t, const WaveFunction& psi) {
    const auto field = radial_cutoff_field(h.grid, t, window);
    return position_multiply(psi, field).squared_norm();
  });
  common_metadata(rep, h, f, setup, "minimal", T);
  rep.metadata.emplace_back("theta0", format_g(theta0));
  rep.metadata.emplace_back("v_min", format_g(kin.v_min));
  rep.metadata.emplace_back("v_max", format_g(kin.v_max));
  rep.metadata.emplace_back("backend", st.backend_name);
  return rep;
}

ExperimentReport maximal_bound_integral(const HamiltonianHandle& h, const SmoothCutoff& f,
                                        double Theta, double theta, const WaveFunction& phi,
                                        double T, const VelocityExperimentSetup& setup,
                                        const std::vector<double>& pp_values) {
  const BandKinematics kin = band_kinematics(h.grid, h.symbol, f);
  check_preconditions(h, f, phi, T, pp_values, kin, "maximal_bound_integral");
  const double c_f = kin.v_max;
  if (!(Theta > c_f)) {
    std::ostringstream os;
    os << "maximal_bound_integral: precondition violated: Theta must exceed C_f = "
       << format_g(c_f);
    throw std::invalid_argument(os.str());
  }
  if (!(theta > Theta))
    throw std::invalid_argument("maximal_bound_integral: require theta > Theta");

  PreparedState st = prepare_filtered_evolution(h, f, phi, setup);
  const VelocityWindow window{Theta, theta, false, 0.0};
  const auto nodes = schedule_nodes(1.0, T, 16, {T});
  ExperimentReport rep = run_quadrature(nodes, st.evolve, [&](double t, const WaveFunction& psi) {
    const auto field = radial_cutoff_field(h.grid, t, window);
    return position_multiply(psi, field).squared_norm();
  });
  common_metadata(rep, h, f, setup, "maximal", T);
  rep.metadata.emplace_back("Theta", format_g(Theta));
  rep.metadata.emplace_back("theta", format_g(theta));
  rep.metadata.emplace_back("C_f", format_g(c_f));
  rep.metadata.emplace_back("backend", st.backend_name);
  return rep;
}

ExperimentReport middle_bound_integral(const HamiltonianHandle& h, const SmoothCutoff& f,
                                       double theta1, double theta2, const WaveFunction& phi,
                                       double T, const VelocityExperimentSetup& setup,
                                       const std::vector<double>& pp_values) {
  if (!(0.0 < theta1 && theta1 < theta2))
    throw std::invalid_argument("middle_bound_integral: require 0 < theta1 < theta2");
  const BandKinematics kin = band_kinematics(h.grid, h.symbol, f);
  check_preconditions(h, f, phi, T, pp_values, kin, "middle_bound_integral");

  PreparedState st = prepare_filtered_evolution(h, f, phi, setup);
  const VelocityWindow window{theta1, theta2, false, 0.0};
  const auto nodes = schedule_nodes(1.0, 2.0 * T, 16, {T, 2.0 * T});
  ExperimentReport rep = run_quadrature(nodes, st.evolve, [&](double t, const WaveFunction& psi) {
    const auto field = radial_cutoff_field(h.grid, t, window);
    double total = 0.0;
    for (const WaveFunction& dev : flux_deviation(psi, h.symbol, t))
      total += position_multiply(dev, field).squared_norm();
    return total;
  });
  common_metadata(rep, h, f, setup, "middle", T);
  rep.metadata.emplace_back("theta1", format_g(theta1));
  rep.metadata.emplace_back("theta2", format_g(theta2));
  rep.metadata.emplace_back("backend", st.backend_name);
  return rep;
}

RemainderDecay commutator_remainder_decay(const GridSpec& grid, const FractionalSymbol& sym,
                                          const SmoothCutoff& chi,
                                          const std::vector<double>& t_list) {
  if (t_list.size() < 5)
    throw std::invalid_argument("commutator_remainder_decay: need at least 5 times");
  if (!std::is_sorted(t_list.begin(), t_list.end()))
    throw std::invalid_argument("commutator_remainder_decay: t_list must be ascending");

  const auto psi_table = multiplier_table(grid, [&](const std::array<double, 3>& xi, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
    return sym.value(s);
  });
  const auto lap_table = multiplier_table(grid, [&](const std::array<double, 3>& xi, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
    return s;
  });
  const auto der_table = multiplier_table(grid, [&](const std::array<double, 3>& xi, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
    return sym.deriv1(s);
  });
  const Eigen::MatrixXcd p = dense_multiplier(grid, psi_table);
  const Eigen::MatrixXcd q = dense_multiplier(grid, lap_table);
  const Eigen::MatrixXcd s = dense_multiplier(grid, der_table);

  // Interior compression: indicator of |x| <= 0.8 L (componentwise max norm).
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.coords_of(i);
    double m = 0.0;
    for (int d = 0; d < grid.dim; ++d) m = std::max(m, std::abs(x[d]));
    w(static_cast<Eigen::Index>(i)) = (m <= 0.8 * grid.half_width) ? 1.0 : 0.0;
  }

  RemainderDecay out;
  for (double t : t_list) {
    Eigen::VectorXd chi_t(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i)
      chi_t(static_cast<Eigen::Index>(i)) =
          chi.value(radial_speed(grid.coords_of(i), grid.dim, t));
    const Eigen::MatrixXcd comm_psi = p * chi_t.asDiagonal() - chi_t.asDiagonal() * p;
    const Eigen::MatrixXcd comm_lap = q * chi_t.asDiagonal() - chi_t.asDiagonal() * q;
    const Eigen::MatrixXcd rem = comm_psi - comm_lap * s;
    const Eigen::MatrixXcd compressed = w.asDiagonal() * rem * w.asDiagonal();
    // Spectral norm via the largest eigenvalue of the Gram matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(compressed.adjoint() * compressed,
                                                       Eigen::EigenvaluesOnly);
    out.times.push_back(t);
    out.norms.push_back(std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
  }

  // Least-squares slope of log norm vs log t over points above the floor.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    if (out.norms[i] < 1e-13) continue;
    const double x = std::log(out.times[i]);
    const double y = std::log(out.norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 3) {
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    out.at_floor = true;
  }
  return out;
}

std::vector<std::pair<double, double>> heisenberg_probe(const EvolutionTrace& trace,
                                                        const ObservableApplier& p) {
  if (!trace.valid)
    throw std::invalid_argument("heisenberg_probe: trace is flagged invalid");
  if (trace.times.size() < 3)
    throw std::invalid_argument("heisenberg_probe: need at least 3 recorded times");
  const double dt = trace.times[1] - trace.times[0];
  if (!(dt > 0.0 && dt <= 0.1))
    throw std::invalid_argument(
        "heisenberg_probe: recording spacing must be positive and <= 0.1");
  for (std::size_t i = 1; i + 1 < trace.times.size(); ++i)
    if (std::abs((trace.times[i + 1] - trace.times[i]) - dt) > 1e-9)
      throw std::invalid_argument("heisenberg_probe: recording must be uniform");

  std::vector<double> expect(trace.times.size());
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    expect[i] =
        std::real(inner(trace.states[i], p(trace.states[i], trace.times[i])));

  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i + 1 < trace.times.size(); ++i)
    out.emplace_back(trace.times[i], (expect[i + 1] - expect[i - 1]) / (2.0 * dt));
  return out;
}

ObservableApplier radial_observable(const std::function<double(double)>& profile) {
  return [profile](const WaveFunction& psi, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("radial_observable: require t > 0");
    WaveFunction out = psi;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      const double v = radial_speed(psi.grid.coords_of(i), psi.grid.dim, t);
      out.values[i] *= profile(v);
    }
    out.cached_norm.reset();
    return out;
  };
}

}  // namespace velobound
