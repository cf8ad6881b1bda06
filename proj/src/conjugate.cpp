#include "velobound/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "velobound/fft.hpp"
#include "velobound/spectral_ops.hpp"
#include "velobound/state.hpp"

namespace velobound {

namespace {

constexpr std::size_t kDenseCap = 4096;

// Packet probes for quadratic-form statements: interior Gaussians (sigma =
// L/8, boundary mass ~1e-12) carried at exact lattice momenta.
std::vector<WaveFunction> interior_probes(const GridSpec& grid,
                                          const std::vector<double>& carriers) {
  std::vector<WaveFunction> probes;
  const double sigma = grid.half_width / 8.0;
  for (double xi0 : carriers) {
    probes.push_back(gaussian_packet(grid, {0.0, 0.0, 0.0}, {xi0, 0.0, 0.0}, sigma));
  }
  return probes;
}

Eigen::VectorXcd to_vector(const WaveFunction& psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.values.size()));
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = psi.values[i];
  return v;
}

// <psi, B psi> / <psi, psi> for a dense Hermitian B, in the counting measure
// (the h^dim factors cancel in the quotient).
double quadratic_form(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& v) {
  return std::real(v.dot(b * v)) / std::real(v.dot(v));
}

}  // namespace

Eigen::MatrixXcd dense_multiplier(const GridSpec& grid, const std::vector<double>& table) {
  const std::size_t n = grid.size();
  if (n > kDenseCap)
    throw std::invalid_argument("dense_multiplier: grid exceeds the dense cap 4096");
  if (table.size() != n)
    throw std::invalid_argument("dense_multiplier: table size does not match grid");
  // A constant symbol is exactly c * Identity; bypass the transforms so the
  // identity holds without rounding (the rho = 1 remainder cancellation
  // depends on it).
  if (std::all_of(table.begin(), table.end(),
                  [&](double v) { return v == table.front(); })) {
    return table.front() *
           Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(n));
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<complexd> column(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(column.begin(), column.end(), complexd{0.0, 0.0});
    column[j] = complexd{1.0, 0.0};
    fft_forward(grid.dim, grid.n_points, column);
    for (std::size_t k = 0; k < n; ++k) column[k] *= table[k];
    fft_inverse(grid.dim, grid.n_points, column);
    for (std::size_t i = 0; i < n; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = column[i];
  }
  return m;
}

ConjugateOperator build_conjugate(const GridSpec& grid, double rho, ConjugateKind kind) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("build_conjugate: rho must lie in (0, 1]");
  const std::size_t n = grid.size();
  if (n > kDenseCap)
    throw std::invalid_argument("build_conjugate: grid exceeds the dense cap 4096");

  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (int axis = 0; axis < grid.dim; ++axis) {
    auto weight = [&](const std::array<double, 3>& xi, int dim) {
      double s = 0.0;
      for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
      const double factor =
          (kind == ConjugateKind::weighted) ? std::pow(1.0 + s, rho - 1.0) : 1.0;
      return factor * xi[axis];
    };
    const Eigen::MatrixXcd m = dense_multiplier(grid, multiplier_table(grid, weight));
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      x(static_cast<Eigen::Index>(i)) = grid.coords_of(i)[axis];
    // (M X + X M) / (2 rho)
    p += (m * x.asDiagonal() + x.asDiagonal() * m) / (2.0 * rho);
  }

  ConjugateOperator a;
  a.kind = kind;
  a.rho = rho;
  a.grid = grid;
  a.presym_defect = (p - p.adjoint()).cwiseAbs().maxCoeff();
  a.dense = 0.5 * (p + Eigen::MatrixXcd(p.adjoint()));
  return a;
}

Eigen::MatrixXcd commutator_iHA(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& a,
                                double* defect) {
  if (h.rows() != a.rows() || h.cols() != a.cols())
    throw std::invalid_argument("commutator_iHA: size mismatch");
  const Eigen::MatrixXcd raw = complexd{0.0, 1.0} * (h * a - a * h);
  if (defect) *defect = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  return 0.5 * (raw + Eigen::MatrixXcd(raw.adjoint()));
}

FreeCommutatorCheck free_commutator_identity_check(const HamiltonianHandle& h,
                                                   const ConjugateOperator& a) {
  if (!h.potential_is_zero())
    throw std::invalid_argument("free_commutator_identity_check: potential must be zero");
  if (!(h.grid == a.grid))
    throw std::invalid_argument("free_commutator_identity_check: grid mismatch");
  const double rho = h.symbol.rho;

  const Eigen::MatrixXcd h_dense = assemble_dense(h);
  const Eigen::MatrixXcd comm = commutator_iHA(h_dense, a.dense);

  // Multiplier side: 2 (1 + |xi|^2)^{2 rho - 2} |xi|^2.
  const auto table = multiplier_table(h.grid, [&](const std::array<double, 3>& xi, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
    return 2.0 * std::pow(1.0 + s, 2.0 * rho - 2.0) * s;
  });

  // Carriers spread over the lower half of the momentum band (packet tails
  // stay clear of the Nyquist fold).
  const double xi_top = M_PI * h.grid.n_points / (2.0 * h.grid.half_width) / 2.0;
  std::vector<double> carriers;
  for (double f : {0.15, 0.3, 0.45}) {
    carriers.push_back(f * xi_top);
    carriers.push_back(-f * xi_top);
  }

  FreeCommutatorCheck check;
  const std::vector<WaveFunction> probes = interior_probes(h.grid, carriers);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const WaveFunction& psi = probes[i];
    const Eigen::VectorXcd v = to_vector(psi);
    const double lhs = quadratic_form(comm, v);
    const WaveFunction mpsi = apply_multiplier(psi, table);
    const double rhs = std::real(inner(psi, mpsi)) / psi.squared_norm();
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    check.rows.push_back({carriers[i], lhs, rhs, rel});
    check.max_rel_error = std::max(check.max_rel_error, rel);
  }
  return check;
}

MourreReport mourre_lower_bound(const HamiltonianHandle& h, const Eigen::MatrixXcd& h_dense,
                                const ConjugateOperator& a, double lambda1, double lambda2,
                                const SpectralDecomposition& decomp,
                                const SmoothCutoff* g_override) {
  if (!(0.0 < lambda1 && lambda1 < lambda2))
    throw std::invalid_argument("mourre_lower_bound: require 0 < lambda1 < lambda2");
  if (!(h.grid == a.grid))
    throw std::invalid_argument("mourre_lower_bound: grid mismatch");
  const double rho = h.symbol.rho;

  MourreReport rep;
  rep.rho = rho;
  rep.lambda1 = lambda1;
  rep.lambda2 = lambda2;
  rep.c_theory = 2.0 * lambda1 * std::pow(1.0 + lambda2, -(1.0 - rho) / rho);
  rep.localized_bound = 0.5 * rep.c_theory;
  rep.free_case = h.potential_is_zero();

  // Spectrum must meet the window at all.
  bool any_in_window = false;
  for (Eigen::Index j = 0; j < decomp.eigenvalues.size(); ++j)
    if (decomp.eigenvalues(j) > lambda1 && decomp.eigenvalues(j) < lambda2)
      any_in_window = true;
  if (!any_in_window)
    throw std::invalid_argument("mourre_lower_bound: window contains no spectrum");

  // Sub-window: central 60% of (lambda1, lambda2), shrunk away from discrete
  // point-spectrum proxies (negative eigenvalues) by twice the residual scale.
  const double width = lambda2 - lambda1;
  double delta_lo = lambda1 + 0.2 * width;
  double delta_hi = lambda2 - 0.2 * width;
  const double scale = std::max(std::abs(decomp.eigenvalues(0)),
                                std::abs(decomp.eigenvalues(decomp.eigenvalues.size() - 1)));
  const double clearance = 2.0 * std::max(decomp.residual, 1e-8 * scale);
  for (Eigen::Index j = 0; j < decomp.eigenvalues.size(); ++j) {
    const double ev = decomp.eigenvalues(j);
    if (ev >= -1e-8 * scale) continue;  // proxy set: strictly negative eigenvalues
    if (ev + clearance > delta_lo && ev - clearance < delta_hi) {
      // Keep the larger remaining side of the sub-window.
      const double left_room = (ev - clearance) - delta_lo;
      const double right_room = delta_hi - (ev + clearance);
      if (right_room >= left_room)
        delta_lo = ev + clearance;
      else
        delta_hi = ev - clearance;
    }
  }
  if (!(delta_lo < delta_hi))
    throw std::invalid_argument("mourre_lower_bound: no eigenvalue-free sub-window");
  rep.delta_lo = delta_lo;
  rep.delta_hi = delta_hi;

  if (g_override) {
    rep.g = *g_override;
    if (rep.g.support_lo() <= lambda1 || rep.g.support_hi() >= lambda2)
      throw std::invalid_argument("mourre_lower_bound: g support leaks outside the window");
  } else {
    const double dw = delta_hi - delta_lo;
    rep.g = make_bump(delta_lo, delta_lo + 0.25 * dw, delta_hi - 0.25 * dw, delta_hi);
  }

  // Closed form of the free commutator multiplier expressed through the
  // energy: lambda = Psi(|xi|^2)  =>  |xi|^2 = (1+lambda)^{1/rho} - 1.
  auto closed_form = [&](double lambda) {
    return 2.0 * std::pow(1.0 + lambda, 2.0 * (rho - 1.0) / rho) *
           (std::pow(1.0 + lambda, 1.0 / rho) - 1.0);
  };

  if (rep.free_case) {
    // Exact per-mode evaluation over the lattice modes inside the sub-window.
    double min_q = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < h.grid.size(); ++k) {
      const auto xi = h.grid.momentum_of(k);
      double s = 0.0;
      for (int d = 0; d < h.grid.dim; ++d) s += xi[d] * xi[d];
      const double lambda = h.symbol.value(s);
      if (lambda < delta_lo || lambda > delta_hi) continue;
      const double q = 2.0 * std::pow(1.0 + s, 2.0 * rho - 2.0) * s;
      rep.rows.push_back({std::to_string(k), lambda, q, closed_form(lambda)});
      min_q = std::min(min_q, q);
      ++rep.probes_used;
    }
    if (rep.rows.empty())
      throw std::invalid_argument("mourre_lower_bound: sub-window contains no lattice mode");
    rep.observed_min = min_q;
  }

  // Dense M = g(H) i[H,A] g(H) and compact part K = M - c_theory g(H)^2.
  const Eigen::MatrixXcd comm = commutator_iHA(h_dense, a.dense);
  Eigen::VectorXd gvals(decomp.eigenvalues.size());
  for (Eigen::Index j = 0; j < decomp.eigenvalues.size(); ++j)
    gvals(j) = rep.g.value(decomp.eigenvalues(j));
  const Eigen::MatrixXcd g_dense =
      decomp.eigenvectors * gvals.asDiagonal() * decomp.eigenvectors.adjoint();
  const Eigen::MatrixXcd m_op = g_dense * comm * g_dense;
  const Eigen::MatrixXcd k_op = m_op - rep.c_theory * g_dense * g_dense;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (k_op + Eigen::MatrixXcd(k_op.adjoint())), Eigen::EigenvaluesOnly);
    rep.k_min_eigenvalue = es.eigenvalues().minCoeff();
    rep.k_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }

  if (!rep.free_case) {
    // Exact minimization over the spectral subspace.  For psi = sum c_j e_j
    // with eigenvalues in the sub-window, g(H) acts diagonally, so
    //   <psi, M psi> / <psi, g(H)^2 psi>
    // ranges over the Rayleigh quotients of i[H,A] on span{e_j}; the minimum
    // is the smallest eigenvalue of the compression E^H i[H,A] E.  Packet
    // sampling is not viable here: a state energy-localized to a sub-window a
    // few level spacings wide necessarily spreads over the whole box, so no
    // probe can stay interior, and sampled minima under-explore the subspace.
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < decomp.eigenvalues.size(); ++j) {
      const double ev = decomp.eigenvalues(j);
      if (ev <= delta_lo || ev >= delta_hi) continue;
      if (!(rep.g.value(ev) > 0.0)) {
        ++rep.probes_skipped;  // g underflows at the sub-window edge
        continue;
      }
      idx.push_back(j);
    }
    if (idx.empty())
      throw std::invalid_argument(
          "mourre_lower_bound: sub-window holds no usable eigenvector");

    Eigen::MatrixXcd e(decomp.eigenvectors.rows(),
                       static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c)
      e.col(static_cast<Eigen::Index>(c)) = decomp.eigenvectors.col(idx[c]);
    const Eigen::MatrixXcd raw = e.adjoint() * comm * e;
    const Eigen::MatrixXcd comp = 0.5 * (raw + Eigen::MatrixXcd(raw.adjoint()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(comp, Eigen::EigenvaluesOnly);
    rep.observed_min = es.eigenvalues().minCoeff();
    rep.probes_used = static_cast<int>(idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) {
      const Eigen::Index cc = static_cast<Eigen::Index>(c);
      rep.rows.push_back({"eig:" + std::to_string(idx[c]), decomp.eigenvalues(idx[c]),
                          std::real(comp(cc, cc)), rep.localized_bound});
    }
  }

  rep.margin = rep.observed_min - rep.localized_bound;
  return rep;
}

DilationCheck dilation_commutator_check(const HamiltonianHandle& h, const LongPart& lp) {
  const GridSpec& grid = h.grid;
  const double rho = h.symbol.rho;

  // The handle must carry exactly the long-range profile (no other parts).
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.coords_of(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) r2 += x[d] * x[d];
    const double expected = lp.amplitude * std::pow(1.0 + r2, -0.5 * lp.gamma_long);
    if (std::abs(h.potential[i] - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
      throw std::invalid_argument(
          "dilation_commutator_check: potential is not the stated long-range profile");
  }

  const ConjugateOperator a = build_conjugate(grid, rho, ConjugateKind::dilation);
  const Eigen::MatrixXcd h_dense = assemble_dense(h);
  const Eigen::MatrixXcd comm = commutator_iHA(h_dense, a.dense);

  // RHS = (2/rho) Psi'(|D|^2) |D|^2 - (1/rho) x.grad V, with
  // x.grad V = -a gamma |x|^2 <x>^{-gamma-2} analytically.
  const auto kin_table = multiplier_table(grid, [&](const std::array<double, 3>& xi, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += xi[d] * xi[d];
    return (2.0 / rho) * h.symbol.deriv1(s) * s;
  });
  std::vector<double> xgrad(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.coords_of(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) r2 += x[d] * x[d];
    xgrad[i] = -lp.amplitude * lp.gamma_long * r2 *
               std::pow(1.0 + r2, -0.5 * (lp.gamma_long + 2.0));
  }

  const double xi_top = M_PI * grid.n_points / (2.0 * grid.half_width) / 2.0;
  std::vector<double> carriers;
  for (double f : {0.0, 0.15, 0.3, 0.45}) {
    carriers.push_back(f * xi_top);
    if (f > 0.0) carriers.push_back(-f * xi_top);
  }

  DilationCheck check;
  for (const WaveFunction& psi : interior_probes(grid, carriers)) {
    const Eigen::VectorXcd v = to_vector(psi);
    const Eigen::VectorXcd cv = comm * v;
    WaveFunction rhs = apply_multiplier(psi, kin_table);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
      rhs.values[i] -= (xgrad[i] / rho) * psi.values[i];
    double diff2 = 0.0;
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
      diff2 += std::norm(cv(static_cast<Eigen::Index>(i)) - rhs.values[i]);
    const double residual = std::sqrt(diff2 / std::real(v.dot(v)));
    check.max_residual = std::max(check.max_residual, residual);
  }

  // Scalar inequality (2/rho) Psi'(s) s >= 2 Psi(s) over the lattice.
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto xi = grid.momentum_of(k);
    double s = 0.0;
    for (int d = 0; d < grid.dim; ++d) s += xi[d] * xi[d];
    min_margin =
        std::min(min_margin, (2.0 / rho) * h.symbol.deriv1(s) * s - 2.0 * h.symbol.value(s));
  }
  check.scalar_min_margin = min_margin;
  return check;
}

}  // namespace velobound
