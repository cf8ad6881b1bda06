#include "velobound/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "velobound/fft.hpp"
#include "velobound/state.hpp"

namespace velobound {

namespace {

void record_state(EvolutionTrace& trace, const HamiltonianHandle& h, double t,
                  const WaveFunction& psi, double norm0) {
  if (!psi.is_finite())
    throw std::runtime_error("propagator: non-finite amplitude at t=" + std::to_string(t));
  const double n = psi.norm();
  const double bm = psi.boundary_mass();
  trace.times.push_back(t);
  trace.states.push_back(psi);
  trace.norms.push_back(n);
  trace.boundary.push_back(bm);
  trace.energies.push_back(std::real(inner(psi, h.apply(psi))));
  if (trace.valid && norm0 > 0.0 && std::abs(n - norm0) > 1e-10 * norm0) {
    trace.valid = false;
    trace.flag_reason = "norm drift exceeds 1e-10 at t=" + std::to_string(t);
  }
  if (trace.valid && bm > 1e-8) {
    trace.valid = false;
    trace.flag_reason = "boundary mass " + std::to_string(bm) + " exceeds 1e-8 at t=" +
                        std::to_string(t);
  }
}

std::vector<double> checked_times(const std::vector<double>& record_times, double t_final) {
  if (record_times.empty())
    throw std::invalid_argument("propagator: empty record schedule");
  std::vector<double> ts = record_times;
  std::sort(ts.begin(), ts.end());
  if (ts.front() < 0.0 || ts.back() > t_final * (1.0 + 1e-12))
    throw std::invalid_argument("propagator: record times outside [0, t_final]");
  return ts;
}

}  // namespace

EvolutionTrace evolve_split_step(const HamiltonianHandle& h, const WaveFunction& psi0,
                                 double t_final, double dt,
                                 const std::vector<double>& record_times) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_split_step: dt must be positive");
  if (!(psi0.grid == h.grid))
    throw std::invalid_argument("evolve_split_step: state grid does not match");
  const auto ts = checked_times(record_times, t_final);

  // Cached step phases.
  const std::size_t n = h.grid.size();
  std::vector<complexd> half_v(n), kin(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double av = -0.5 * dt * h.potential[i];
    half_v[i] = complexd{std::cos(av), std::sin(av)};
    const double ak = -dt * h.kinetic[i];
    kin[i] = complexd{std::cos(ak), std::sin(ak)};
  }

  EvolutionTrace trace;
  trace.method = "split_step";
  const double norm0 = psi0.norm();

  WaveFunction psi = psi0;
  long step = 0;
  for (double t_rec : ts) {
    const long target = std::lround(t_rec / dt);
    while (step < target) {
      for (std::size_t i = 0; i < n; ++i) psi.values[i] *= half_v[i];
      fft_forward(h.grid.dim, h.grid.n_points, psi.values);
      for (std::size_t i = 0; i < n; ++i) psi.values[i] *= kin[i];
      fft_inverse(h.grid.dim, h.grid.n_points, psi.values);
      for (std::size_t i = 0; i < n; ++i) psi.values[i] *= half_v[i];
      ++step;
    }
    psi.cached_norm.reset();
    record_state(trace, h, static_cast<double>(target) * dt, psi, norm0);
    if (!trace.valid) break;
  }
  return trace;
}

EvolutionTrace evolve_exact(const HamiltonianHandle& h, const SpectralDecomposition& d,
                            const WaveFunction& psi0,
                            const std::vector<double>& record_times) {
  if (static_cast<std::size_t>(d.eigenvectors.rows()) != h.grid.size())
    throw std::invalid_argument("evolve_exact: decomposition does not match grid");
  const auto ts = checked_times(record_times,
                                *std::max_element(record_times.begin(), record_times.end()));
  EvolutionTrace trace;
  trace.method = "dense";
  const double norm0 = psi0.norm();

  Eigen::VectorXcd v0(psi0.values.size());
  for (std::size_t i = 0; i < psi0.values.size(); ++i)
    v0(static_cast<Eigen::Index>(i)) = psi0.values[i];
  const Eigen::VectorXcd coeff = d.eigenvectors.adjoint() * v0;

  for (double t : ts) {
    Eigen::VectorXcd phased(coeff.size());
    for (Eigen::Index j = 0; j < coeff.size(); ++j) {
      const double a = -d.eigenvalues(j) * t;
      phased(j) = coeff(j) * complexd{std::cos(a), std::sin(a)};
    }
    const Eigen::VectorXcd vt = d.eigenvectors * phased;
    WaveFunction psi(h.grid);
    for (std::size_t i = 0; i < psi.values.size(); ++i)
      psi.values[i] = vt(static_cast<Eigen::Index>(i));
    record_state(trace, h, t, psi, norm0);
    if (!trace.valid) break;
  }
  return trace;
}

EvolutionTrace evolve_free_multiplier(const HamiltonianHandle& h, const WaveFunction& psi0,
                                      const std::vector<double>& record_times) {
  if (!h.potential_is_zero())
    throw std::invalid_argument("evolve_free_multiplier: potential must vanish");
  const auto ts = checked_times(record_times,
                                *std::max_element(record_times.begin(), record_times.end()));
  EvolutionTrace trace;
  trace.method = "multiplier";
  const double norm0 = psi0.norm();

  std::vector<complexd> hat = psi0.values;
  fft_forward(h.grid.dim, h.grid.n_points, hat);
  for (double t : ts) {
    WaveFunction psi(h.grid);
    for (std::size_t i = 0; i < hat.size(); ++i) {
      const double a = -h.kinetic[i] * t;
      psi.values[i] = hat[i] * complexd{std::cos(a), std::sin(a)};
    }
    fft_inverse(h.grid.dim, h.grid.n_points, psi.values);
    record_state(trace, h, t, psi, norm0);
    if (!trace.valid) break;
  }
  return trace;
}

VelocityFit centroid_velocity(const EvolutionTrace& trace) {
  if (trace.times.size() < 2)
    throw std::invalid_argument("centroid_velocity: need at least two samples");
  const std::size_t m = trace.times.size();
  double st = 0.0, stt = 0.0;
  std::array<double, 3> sx{0, 0, 0}, sxt{0, 0, 0};
  std::vector<std::array<double, 3>> cs(m);
  for (std::size_t i = 0; i < m; ++i) cs[i] = centroid(trace.states[i]);
  for (std::size_t i = 0; i < m; ++i) {
    st += trace.times[i];
    stt += trace.times[i] * trace.times[i];
    for (int d = 0; d < 3; ++d) {
      sx[d] += cs[i][d];
      sxt[d] += cs[i][d] * trace.times[i];
    }
  }
  const double n = static_cast<double>(m);
  const double denom = n * stt - st * st;
  if (std::abs(denom) < 1e-300)
    throw std::invalid_argument("centroid_velocity: degenerate time samples");
  VelocityFit fit;
  for (int d = 0; d < 3; ++d) {
    fit.slope[d] = (n * sxt[d] - st * sx[d]) / denom;
    fit.intercept[d] = (sx[d] - fit.slope[d] * st) / n;
  }
  return fit;
}

Evolution make_multiplier_evolution(const HamiltonianHandle& h, WaveFunction psi0) {
  if (!h.potential_is_zero())
    throw std::invalid_argument("make_multiplier_evolution: potential must vanish");
  auto hat = std::make_shared<std::vector<complexd>>(psi0.values);
  fft_forward(h.grid.dim, h.grid.n_points, *hat);
  const GridSpec grid = h.grid;
  auto kin = std::make_shared<std::vector<double>>(h.kinetic);
  return [grid, hat, kin](double t) {
    WaveFunction psi(grid);
    for (std::size_t i = 0; i < hat->size(); ++i) {
      const double a = -(*kin)[i] * t;
      psi.values[i] = (*hat)[i] * complexd{std::cos(a), std::sin(a)};
    }
    fft_inverse(grid.dim, grid.n_points, psi.values);
    return psi;
  };
}

Evolution make_dense_evolution(const HamiltonianHandle& h, const SpectralDecomposition& d,
                               WaveFunction psi0) {
  Eigen::VectorXcd v0(psi0.values.size());
  for (std::size_t i = 0; i < psi0.values.size(); ++i)
    v0(static_cast<Eigen::Index>(i)) = psi0.values[i];
  auto coeff = std::make_shared<Eigen::VectorXcd>(d.eigenvectors.adjoint() * v0);
  auto vecs = std::make_shared<Eigen::MatrixXcd>(d.eigenvectors);
  auto vals = std::make_shared<Eigen::VectorXd>(d.eigenvalues);
  const GridSpec grid = h.grid;
  return [grid, coeff, vecs, vals](double t) {
    Eigen::VectorXcd phased(coeff->size());
    for (Eigen::Index j = 0; j < coeff->size(); ++j) {
      const double a = -(*vals)(j)*t;
      phased(j) = (*coeff)(j)*complexd{std::cos(a), std::sin(a)};
    }
    const Eigen::VectorXcd vt = (*vecs) * phased;
    WaveFunction psi(grid);
    for (std::size_t i = 0; i < psi.values.size(); ++i)
      psi.values[i] = vt(static_cast<Eigen::Index>(i));
    return psi;
  };
}

Evolution make_split_step_evolution(const HamiltonianHandle& h, WaveFunction psi0,
                                    double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("make_split_step_evolution: dt must be positive");
  struct State {
    WaveFunction psi;
    long step = 0;
    std::vector<complexd> half_v, kin;
  };
  auto st = std::make_shared<State>();
  st->psi = std::move(psi0);
  const std::size_t n = h.grid.size();
  st->half_v.resize(n);
  st->kin.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double av = -0.5 * dt * h.potential[i];
    st->half_v[i] = complexd{std::cos(av), std::sin(av)};
    const double ak = -dt * h.kinetic[i];
    st->kin[i] = complexd{std::cos(ak), std::sin(ak)};
  }
  const GridSpec grid = h.grid;
  return [st, dt, grid](double t) {
    const long target = std::lround(t / dt);
    if (target < st->step)
      throw std::invalid_argument("split-step evolution requires ascending times");
    while (st->step < target) {
      auto& v = st->psi.values;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= st->half_v[i];
      fft_forward(grid.dim, grid.n_points, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= st->kin[i];
      fft_inverse(grid.dim, grid.n_points, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= st->half_v[i];
      ++st->step;
    }
    st->psi.cached_norm.reset();
    return st->psi;
  };
}

}  // namespace velobound
