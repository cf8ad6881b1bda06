#include "velobound/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "velobound/fft.hpp"
#include "velobound/state.hpp"

namespace velobound {

HamiltonianHandle HamiltonianHandle::make(const GridSpec& grid,
                                          const FractionalSymbol& sym,
                                          const PotentialSpec& pot) {
  return make(grid, sym, sample_potential(pot, grid));
}

HamiltonianHandle HamiltonianHandle::make(const GridSpec& grid,
                                          const FractionalSymbol& sym,
                                          std::vector<double> potential_field) {
  if (potential_field.size() != grid.size())
    throw std::invalid_argument("Hamiltonian: potential size does not match grid");
  for (double v : potential_field)
    if (!std::isfinite(v))
      throw std::invalid_argument("Hamiltonian: non-finite potential value");
  HamiltonianHandle h;
  h.grid = grid;
  h.symbol = sym;
  h.potential = std::move(potential_field);
  h.kinetic = kinetic_table(grid, sym);
  return h;
}

WaveFunction HamiltonianHandle::apply(const WaveFunction& psi) const {
  if (!(psi.grid == grid))
    throw std::invalid_argument("Hamiltonian: state grid does not match");
  WaveFunction kin(grid);
  kin.values = psi.values;
  fft_forward(grid.dim, grid.n_points, kin.values);
  for (std::size_t i = 0; i < kin.values.size(); ++i) kin.values[i] *= kinetic[i];
  fft_inverse(grid.dim, grid.n_points, kin.values);
  for (std::size_t i = 0; i < kin.values.size(); ++i)
    kin.values[i] += potential[i] * psi.values[i];
  return kin;
}

double HamiltonianHandle::kinetic_band_top() const {
  return *std::max_element(kinetic.begin(), kinetic.end());
}

double HamiltonianHandle::potential_max_abs() const {
  double m = 0.0;
  for (double v : potential) m = std::max(m, std::abs(v));
  return m;
}

bool HamiltonianHandle::potential_is_zero() const {
  return std::all_of(potential.begin(), potential.end(),
                     [](double v) { return v == 0.0; });
}

Eigen::MatrixXcd assemble_dense(const HamiltonianHandle& h) {
  const std::size_t n = h.grid.size();
  if (n > 4096)
    throw std::invalid_argument("assemble_dense: N^dim exceeds the dense cap 4096");
  Eigen::MatrixXcd m(n, n);
  std::vector<complexd> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), complexd{0.0, 0.0});
    col[j] = complexd{1.0, 0.0};
    fft_forward(h.grid.dim, h.grid.n_points, col);
    for (std::size_t i = 0; i < n; ++i) col[i] *= h.kinetic[i];
    fft_inverse(h.grid.dim, h.grid.n_points, col);
    for (std::size_t i = 0; i < n; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += h.potential[j];
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && defect > 1e-12 * scale)
    throw std::runtime_error("assemble_dense: Hermiticity defect " +
                             std::to_string(defect / scale) + " exceeds 1e-12");
  return m;
}

SpectralDecomposition diagonalize(const Eigen::MatrixXcd& H) {
  if (H.rows() != H.cols())
    throw std::invalid_argument("diagonalize: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: eigensolver did not converge");
  SpectralDecomposition d;
  d.eigenvalues = solver.eigenvalues();
  d.eigenvectors = solver.eigenvectors();

  const Eigen::Index n = H.rows();
  Eigen::MatrixXcd gram = d.eigenvectors.adjoint() * d.eigenvectors;
  gram -= Eigen::MatrixXcd::Identity(n, n);
  d.orthonormality_defect = gram.cwiseAbs().maxCoeff();

  const Eigen::MatrixXcd res =
      H * d.eigenvectors - d.eigenvectors * d.eigenvalues.asDiagonal();
  d.residual = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    d.residual = std::max(d.residual, res.col(j).norm());

  const double hnorm =
      std::max(std::abs(d.eigenvalues(0)), std::abs(d.eigenvalues(n - 1)));
  if (d.orthonormality_defect > 1e-10)
    throw std::runtime_error("diagonalize: orthonormality defect " +
                             std::to_string(d.orthonormality_defect));
  if (hnorm > 0.0 && d.residual > 1e-9 * hnorm)
    throw std::runtime_error("diagonalize: residual " + std::to_string(d.residual) +
                             " exceeds 1e-9 * ||H||");
  return d;
}

WaveFunction eigenvector_state(const GridSpec& grid, const SpectralDecomposition& d,
                               int j) {
  if (j < 0 || j >= d.eigenvectors.cols())
    throw std::invalid_argument("eigenvector_state: index out of range");
  if (static_cast<std::size_t>(d.eigenvectors.rows()) != grid.size())
    throw std::invalid_argument("eigenvector_state: decomposition does not match grid");
  WaveFunction psi(grid);
  const double scale = 1.0 / std::sqrt(grid.cell_measure());
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    psi.values[i] = d.eigenvectors(static_cast<Eigen::Index>(i), j) * scale;
  return psi;
}

std::vector<RelativeBoundPoint> relative_bound_probe(
    const HamiltonianHandle& h, const std::vector<double>& sing_field,
    const std::vector<double>& deltas, std::uint64_t seed) {
  if (sing_field.size() != h.grid.size())
    throw std::invalid_argument("relative_bound_probe: field size does not match grid");
  for (double d : deltas)
    if (!(d > 0.0))
      throw std::invalid_argument("relative_bound_probe: delta values must be positive");

  // Fixed probe family: Gaussians of several widths/momenta plus seeded
  // band-limited noise.  Probes only enter through norms, so no interior
  // support requirement applies here.
  std::vector<WaveFunction> probes;
  const double xi_top = std::sqrt(h.kinetic_band_top() > 0.0
                                      ? std::expm1(std::log1p(h.kinetic_band_top()) / h.symbol.rho)
                                      : 1.0);
  const double xi_ref = xi_top / 2.0;
  for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
    for (double frac : {0.0, 0.25, 0.5}) {
      std::array<double, 3> k{0.0, 0.0, 0.0};
      k[0] = frac * xi_ref;
      probes.push_back(gaussian_packet(h.grid, {0.0, 0.0, 0.0}, k, sigma));
    }
  }
  for (int i = 0; i < 20; ++i)
    probes.push_back(random_band_limited(h.grid, xi_ref, seed + static_cast<std::uint64_t>(i)));

  // Precompute ||psi||, ||Psi(|D|^2) psi|| per probe.
  std::vector<double> norms, kin_norms;
  for (const auto& p : probes) {
    norms.push_back(p.norm());
    kin_norms.push_back(apply_multiplier(p, h.kinetic).norm());
  }

  std::vector<RelativeBoundPoint> out;
  for (double delta : deltas) {
    std::vector<double> low_table(h.kinetic.size());
    for (std::size_t i = 0; i < h.kinetic.size(); ++i)
      low_table[i] = 1.0 / (1.0 + delta * h.kinetic[i]);
    // C_eff from the low-pass split, then the sharp residual coefficient:
    // epsilon_eff = max_phi max(0, ||V phi|| - C_eff ||phi||) / ||Psi phi||,
    // so ||V phi|| <= epsilon_eff ||Psi phi|| + C_eff ||phi|| on the family.
    double c_eff = 0.0, eps_eff = 0.0;
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      const WaveFunction low = apply_multiplier(probes[pi], low_table);
      const double v_low = position_multiply(low, sing_field).norm();
      if (norms[pi] > 0.0) c_eff = std::max(c_eff, v_low / norms[pi]);
    }
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
      const double v_full = position_multiply(probes[pi], sing_field).norm();
      const double excess = v_full - c_eff * norms[pi];
      if (excess > 0.0 && kin_norms[pi] > 0.0)
        eps_eff = std::max(eps_eff, excess / kin_norms[pi]);
    }
    out.push_back({delta, eps_eff, c_eff});
  }
  return out;
}

std::vector<RelativeBoundPoint> relative_bound_probe(const HamiltonianHandle& h,
                                                     const SingularPart& sing,
                                                     const std::vector<double>& deltas,
                                                     std::uint64_t seed) {
  PotentialSpec spec;
  spec.sing = sing;
  const Admissibility adm = admissibility_check(spec, h.symbol.rho, h.grid.dim);
  if (!adm.admissible)
    throw std::invalid_argument("relative_bound_probe: inadmissible singular part: " +
                                adm.reason);
  return relative_bound_probe(h, sample_potential(spec, h.grid), deltas, seed);
}

namespace {

std::vector<double> negatives_in_window(const SpectralDecomposition& d, double lo,
                                        double hi, double hnorm) {
  std::vector<double> out;
  const double tol = 1e-8 * hnorm;
  for (Eigen::Index j = 0; j < d.eigenvalues.size(); ++j) {
    const double l = d.eigenvalues(j);
    if (l < -tol && l >= lo && l <= hi) out.push_back(l);
  }
  return out;
}

}  // namespace

PointSpectrumReport point_spectrum_report(const HamiltonianHandle& h_coarse,
                                          const SpectralDecomposition& coarse,
                                          const HamiltonianHandle& h_fine,
                                          const SpectralDecomposition& fine,
                                          double window_lo, double window_hi) {
  if (!(window_lo < window_hi))
    throw std::invalid_argument("point_spectrum_report: empty window");
  PointSpectrumReport rep;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;

  const auto hnorm = [](const SpectralDecomposition& d) {
    const Eigen::Index n = d.eigenvalues.size();
    return std::max(std::abs(d.eigenvalues(0)), std::abs(d.eigenvalues(n - 1)));
  };
  const auto neg_c = negatives_in_window(coarse, window_lo, window_hi, hnorm(coarse));
  const auto neg_f = negatives_in_window(fine, window_lo, window_hi, hnorm(fine));

  const std::size_t matched = std::min(neg_c.size(), neg_f.size());
  for (std::size_t i = 0; i < matched; ++i) {
    const double drift =
        std::abs(neg_f[i] - neg_c[i]) / std::max(std::abs(neg_c[i]), 1e-300);
    rep.matched.push_back({neg_c[i], neg_f[i], drift});
  }
  rep.unmatched_coarse = static_cast<int>(neg_c.size() - matched);
  rep.unmatched_fine = static_cast<int>(neg_f.size() - matched);
  for (std::size_t i = 1; i < neg_f.size(); ++i)
    rep.gaps.push_back(neg_f[i] - neg_f[i - 1]);

  // Embedded candidates: positive window eigenvalues that survive refinement
  // (<5% drift) and sit isolated relative to the local quasi-continuum
  // spacing.  Grid artifacts drift with the lattice and fail the first test.
  std::vector<double> pos_c, pos_f;
  for (Eigen::Index j = 0; j < coarse.eigenvalues.size(); ++j) {
    const double l = coarse.eigenvalues(j);
    if (l > 0.0 && l >= window_lo && l <= window_hi) pos_c.push_back(l);
  }
  for (Eigen::Index j = 0; j < fine.eigenvalues.size(); ++j) {
    const double l = fine.eigenvalues(j);
    if (l > 0.0 && l >= window_lo && l <= window_hi) pos_f.push_back(l);
  }
  if (!pos_f.empty()) {
    const double mean_gap = (window_hi - window_lo) / static_cast<double>(pos_f.size());
    for (std::size_t i = 0; i < pos_f.size(); ++i) {
      const double l = pos_f[i];
      double gap = mean_gap * 1e9;
      if (i > 0) gap = std::min(gap, l - pos_f[i - 1]);
      if (i + 1 < pos_f.size()) gap = std::min(gap, pos_f[i + 1] - l);
      if (gap < 3.0 * mean_gap) continue;
      double best = 1e300;
      for (double lc : pos_c) best = std::min(best, std::abs(lc - l));
      if (best / std::max(std::abs(l), 1e-300) < 0.05)
        rep.embedded_candidates.push_back(l);
    }
  }

  const double edge = std::min(h_coarse.kinetic_band_top(), h_fine.kinetic_band_top());
  rep.band_edge_flag = window_hi >= 0.9 * edge;
  return rep;
}

void write_dense_matrix(const std::string& path, const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("write_dense_matrix: matrix must be square");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_dense_matrix: cannot open " + path);
  out.write("VBHMAT01", 8);
  // Row-major interleaved (re, im); Eigen stores column-major, so walk rows.
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
  if (!out) throw std::runtime_error("write_dense_matrix: write failed");
}

Eigen::MatrixXcd read_dense_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("read_dense_matrix: cannot open " + path);
  const std::streamoff bytes = in.tellg();
  if (bytes < 8) throw std::runtime_error("read_dense_matrix: truncated file");
  in.seekg(0);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "VBHMAT01", 8) != 0)
    throw std::runtime_error("read_dense_matrix: bad magic");
  const std::streamoff payload = bytes - 8;
  if (payload % 16 != 0)
    throw std::runtime_error("read_dense_matrix: payload is not complex float64");
  const std::size_t count = static_cast<std::size_t>(payload / 16);
  const std::size_t n = static_cast<std::size_t>(std::llround(std::sqrt(double(count))));
  if (n * n != count)
    throw std::runtime_error("read_dense_matrix: payload is not a square matrix");
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re, im;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = complexd{re, im};
    }
  }
  if (!in) throw std::runtime_error("read_dense_matrix: read failed");
  return m;
}

}  // namespace velobound
