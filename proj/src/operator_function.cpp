#include "velobound/operator_function.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace velobound {

SpectralBounds estimate_spectral_bounds(const HamiltonianHandle& h, int iterations,
                                        double margin, std::uint64_t seed) {
  const double c = h.kinetic_band_top() + h.potential_max_abs();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  WaveFunction start(h.grid);
  for (auto& v : start.values) v = complexd{uni(rng), uni(rng)};
  const double n0 = start.norm();
  for (auto& v : start.values) v /= n0;

  // Rayleigh quotient after power iterations on H + cI (dominant c + lambda_max)
  // and cI - H (dominant c - lambda_min).
  auto dominant = [&](double shift_sign) {
    WaveFunction v = start;
    double quotient = 0.0;
    for (int it = 0; it < iterations; ++it) {
      WaveFunction hv = h.apply(v);
      WaveFunction w(h.grid);
      for (std::size_t i = 0; i < w.values.size(); ++i)
        w.values[i] = c * v.values[i] + shift_sign * hv.values[i];
      quotient = std::real(inner(v, w));
      const double nw = w.norm();
      if (!(nw > 0.0)) break;
      for (auto& x : w.values) x /= nw;
      w.cached_norm.reset();
      v = w;
    }
    return quotient;
  };

  const double hi_raw = dominant(+1.0) - c;  // lambda_max
  const double lo_raw = c - dominant(-1.0);  // lambda_min
  SpectralBounds b;
  const double span = std::max(hi_raw - lo_raw, 1e-12);
  b.lo = lo_raw - margin * span;
  b.hi = hi_raw + margin * span;
  return b;
}

OperatorFunction OperatorFunction::dense(const GridSpec& grid,
                                         const SpectralDecomposition& d, ScalarFn f) {
  if (static_cast<std::size_t>(d.eigenvectors.rows()) != grid.size())
    throw std::invalid_argument("OperatorFunction: decomposition does not match grid");
  OperatorFunction op;
  op.dense_ = std::make_shared<DensePart>();
  op.dense_->grid = grid;
  op.dense_->vectors = d.eigenvectors;
  op.dense_->fvalues.resize(d.eigenvalues.size());
  for (Eigen::Index j = 0; j < d.eigenvalues.size(); ++j) {
    const double fv = f(d.eigenvalues(j));
    if (!std::isfinite(fv))
      throw std::invalid_argument("OperatorFunction: f produced a non-finite value");
    op.dense_->fvalues(j) = fv;
  }
  return op;
}

OperatorFunction OperatorFunction::chebyshev(const HamiltonianHandle& h, ScalarFn f,
                                             SpectralBounds bounds, int max_degree,
                                             double tail_tol) {
  if (!(bounds.hi > bounds.lo))
    throw std::invalid_argument("OperatorFunction: empty spectral bounds");
  if (max_degree < 1 || max_degree > 10000)
    throw std::invalid_argument("OperatorFunction: degree cap must lie in [1, 104]");

  // Coefficients from Chebyshev-node sampling; grow the sample count until
  // the absolute coefficient tail falls below tail_tol (or the cap).
  const double c0 = 0.5 * (bounds.lo + bounds.hi);
  const double c1 = 0.5 * (bounds.hi - bounds.lo);
  std::vector<double> coeffs;
  int degree = 0;
  for (int m = 256; ; m *= 2) {
    if (m > max_degree + 1) m = max_degree + 1;
    std::vector<double> fx(m);
    for (int j = 0; j < m; ++j) {
      const double theta = std::numbers::pi * (j + 0.5) / m;
      fx[j] = f(c0 + c1 * std::cos(theta));
      if (!std::isfinite(fx[j]))
        throw std::invalid_argument("OperatorFunction: f produced a non-finite value");
    }
    coeffs.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
      double s = 0.0;
      for (int j = 0; j < m; ++j)
        s += fx[j] * std::cos(k * std::numbers::pi * (j + 0.5) / m);
      coeffs[k] = (k == 0 ? 1.0 : 2.0) * s / m;
    }
    // Truncate where the remaining tail is below tolerance.
    double tail = 0.0;
    int keep = m;
    std::vector<double> tails(m + 1, 0.0);
    for (int k = m - 1; k >= 0; --k) tails[k] = tails[k + 1] + std::abs(coeffs[k]);
    for (int k = 0; k <= m; ++k) {
      if (tails[k] < tail_tol) {
        keep = k;
        break;
      }
    }
    tail = tails[keep > 0 ? keep : 0];
    (void)tail;
    if (keep < m || m == max_degree + 1) {
      if (keep == m && m == max_degree + 1)
        keep = m;  // cap reached; use everything we have
      coeffs.resize(std::max(keep, 1));
      degree = static_cast<int>(coeffs.size()) - 1;
      break;
    }
  }

  OperatorFunction op;
  op.h_ = std::make_shared<HamiltonianHandle>(h);
  op.bounds_ = bounds;
  op.coeffs_ = std::move(coeffs);
  op.degree_ = degree;
  return op;
}

WaveFunction OperatorFunction::apply(const WaveFunction& psi) const {
  if (dense_) {
    if (!(psi.grid == dense_->grid))
      throw std::invalid_argument("OperatorFunction: state grid does not match");
    Eigen::VectorXcd v(psi.values.size());
    for (std::size_t i = 0; i < psi.values.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = psi.values[i];
    Eigen::VectorXcd coeff = dense_->vectors.adjoint() * v;
    for (Eigen::Index j = 0; j < coeff.size(); ++j) coeff(j) *= dense_->fvalues(j);
    const Eigen::VectorXcd out = dense_->vectors * coeff;
    WaveFunction r(psi.grid);
    for (std::size_t i = 0; i < r.values.size(); ++i)
      r.values[i] = out(static_cast<Eigen::Index>(i));
    return r;
  }

  if (!(psi.grid == h_->grid))
    throw std::invalid_argument("OperatorFunction: state grid does not match");
  const double c0 = 0.5 * (bounds_.lo + bounds_.hi);
  const double c1 = 0.5 * (bounds_.hi - bounds_.lo);
  const double norm0 = psi.norm();

  // y = (H - c0)/c1; T_{k+1} = 2 y T_k - T_{k-1}.
  auto apply_y = [&](const WaveFunction& v) {
    WaveFunction hv = h_->apply(v);
    WaveFunction out(v.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = (hv.values[i] - c0 * v.values[i]) / c1;
    return out;
  };

  WaveFunction t_prev = psi;
  WaveFunction acc(psi.grid);
  for (std::size_t i = 0; i < acc.values.size(); ++i)
    acc.values[i] = coeffs_[0] * psi.values[i];
  if (coeffs_.size() == 1) return acc;

  WaveFunction t_cur = apply_y(psi);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    for (std::size_t i = 0; i < acc.values.size(); ++i)
      acc.values[i] += coeffs_[k] * t_cur.values[i];
    if (k + 1 == coeffs_.size()) break;
    WaveFunction t_next = apply_y(t_cur);
    for (std::size_t i = 0; i < t_next.values.size(); ++i)
      t_next.values[i] = 2.0 * t_next.values[i] - t_prev.values[i];
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
    t_cur.cached_norm.reset();
    if (norm0 > 0.0 && t_cur.norm() > 10.0 * norm0)
      throw std::runtime_error(
          "OperatorFunction: Chebyshev recurrence blow-up (spectral bounds do not "
          "enclose the spectrum)");
  }
  return acc;
}

bool spectrum_avoidance(const SmoothCutoff& f, const std::vector<double>& pp_values) {
  for (double l : pp_values) {
    if (l <= f.support_lo() || l >= f.support_hi()) continue;
    if (f.value(l) > 1e-12) return false;
  }
  return true;
}

}  // namespace velobound
