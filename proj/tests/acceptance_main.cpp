// Acceptance gate: evaluates the thirteen release criteria and prints exactly
// one PASS/FAIL line per criterion id.  Exit code = number of failures.
//
// Usage: acceptance <velobound-cli> <configs-dir>
//   C1-C12 run in process against the library; C13 shells out to the CLI and
//   re-runs every config, comparing the produced CSVs byte for byte.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "velobound/config.hpp"
#include "velobound/conjugate.hpp"
#include "velobound/cutoff.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"
#include "velobound/observables.hpp"
#include "velobound/potential.hpp"
#include "velobound/propagator.hpp"
#include "velobound/report.hpp"
#include "velobound/rfunction.hpp"
#include "velobound/state.hpp"
#include "velobound/symbol.hpp"

using namespace velobound;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << id << " " << detail << std::endl;
  if (!ok) ++g_failures;
}

void report_exception(const std::string& id, const std::exception& e) {
  report(id, false, std::string("unhandled exception: ") + e.what());
}

std::string fmtg(double v) { return format_number(v); }

// ---------------------------------------------------------------------------
// C1: symbol derivative identity over 10^4 random (rho, s).

void criterion_c1() {
  std::mt19937_64 rng(20260815);
  std::uniform_real_distribution<double> rho_dist(0.05, 1.0);
  std::uniform_real_distribution<double> exp_dist(-6.0, 6.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double rho = (i % 100 == 0) ? 1.0 : rho_dist(rng);
    const double s = std::pow(10.0, exp_dist(rng));
    const FractionalSymbol sym(rho);
    const double lhs = sym.deriv1(s);
    const double rhs = rho / std::pow(1.0 + sym.value(s), (1.0 - rho) / rho);
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    worst = std::max(worst, rel);
  }
  report("C1", worst <= 1e-13,
         "symbol identity Psi' = rho/(1+Psi)^((1-rho)/rho): max rel err " + fmtg(worst) +
             " over 10^4 samples (tol 1e-13)");
}

// ---------------------------------------------------------------------------
// C2: dense free spectrum reproduces the kinetic multiplier multiset.

void criterion_c2() {
  double worst = 0.0;
  for (double rho : {0.25, 0.5, 0.75, 1.0}) {
    const GridSpec g(1, 64, 8.0);
    const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(rho), PotentialSpec{});
    const SpectralDecomposition d = diagonalize(assemble_dense(h));
    std::vector<double> expected = h.kinetic;
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < expected.size(); ++i)
      worst = std::max(worst,
                       std::abs(d.eigenvalues(static_cast<Eigen::Index>(i)) - expected[i]));
  }
  report("C2", worst <= 1e-10,
         "free spectrum multiset, rho in {0.25,0.5,0.75,1}, N=64: max err " + fmtg(worst) +
             " (tol 1e-10)");
}

// ---------------------------------------------------------------------------
// C3: split-step converges to the dense oracle at second order on the well.

double split_error(const HamiltonianHandle& h, const SpectralDecomposition& d,
                   const WaveFunction& psi0, double t, double dt) {
  const std::vector<double> rec{t};
  const EvolutionTrace exact = evolve_exact(h, d, psi0, rec);
  const EvolutionTrace split = evolve_split_step(h, psi0, t, dt, rec);
  if (!exact.valid || !split.valid) return std::numeric_limits<double>::infinity();
  const auto& a = exact.states.back().values;
  const auto& b = split.states.back().values;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * psi0.grid.cell_measure());
}

void criterion_c3() {
  const GridSpec g(1, 256, 16.0);
  PotentialSpec pot;
  pot.short_range = ShortPart{-1.0, 1.5, ShortProfile::bump};
  const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(0.5), pot);
  const SpectralDecomposition d = diagonalize(assemble_dense(h));
  const WaveFunction psi0 = gaussian_packet(g, {0, 0, 0}, {0, 0, 0}, 1.5);

  const double e1 = split_error(h, d, psi0, 5.0, 1e-3);
  const double e2 = split_error(h, d, psi0, 5.0, 5e-4);
  const double ratio = e1 / std::max(e2, 1e-300);
  const bool ok = e1 <= 1e-6 && ratio >= 3.2 && ratio <= 4.8;
  report("C3", ok,
         "split-step vs dense oracle, 1D well rho=1/2 N=256 t=5: L2 err " + fmtg(e1) +
             " at dt=1e-3 (tol 1e-6), halving ratio " + fmtg(ratio) + " (4 +/- 20%)");
}

// ---------------------------------------------------------------------------
// C4: centroid drift matches the group-velocity law 2 xi0 Psi'(xi0^2).
// Free Ehrenfest drift is the spectral mean of the group velocity, so the
// packets are kept spectrally narrow (sigma = 6) to hold the curvature bias
// ~ v''(xi0)/(4 sigma^2) well below the 2% tolerance.

void criterion_c4() {
  struct Pair {
    double rho, xi0;
  };
  const std::array<Pair, 5> pairs{{{1.0, 1.0}, {0.5, 1.0}, {0.75, 0.8}, {0.25, 1.2},
                                   {0.5, 0.6}}};
  double worst = 0.0;
  bool exact_ok = true;
  for (const auto& p : pairs) {
    const GridSpec g(1, 256, 64.0);
    const FractionalSymbol sym(p.rho);
    const HamiltonianHandle h = HamiltonianHandle::make(g, sym, PotentialSpec{});
    const WaveFunction psi0 = gaussian_packet(g, {0, 0, 0}, {p.xi0, 0, 0}, 6.0);
    std::vector<double> rec;
    for (int i = 0; i <= 8; ++i) rec.push_back(static_cast<double>(i));
    const EvolutionTrace trace = evolve_free_multiplier(h, psi0, rec);
    if (!trace.valid) {
      worst = std::max(worst, 1.0);
      continue;
    }
    const double expected = 2.0 * p.xi0 * sym.deriv1(p.xi0 * p.xi0);
    const double slope = centroid_velocity(trace).slope[0];
    worst = std::max(worst, std::abs(slope - expected) / std::abs(expected));
    // Closed-form anchors: exactly 2 xi0 at rho=1, sqrt(2)/2 at (1/2, 1).
    if (p.rho == 1.0) exact_ok = exact_ok && expected == 2.0 * p.xi0;
    if (p.rho == 0.5 && p.xi0 == 1.0)
      exact_ok = exact_ok && std::abs(expected - std::sqrt(0.5)) <= 1e-15;
  }
  report("C4", worst <= 0.02 && exact_ok,
         "group-velocity law over 5 (rho,xi0) pairs: max rel err " + fmtg(worst) +
             " (tol 0.02), anchors 2*xi0 and sqrt(2)/2 " +
             (exact_ok ? "exact" : "WRONG"));
}

// ---------------------------------------------------------------------------
// C5: free commutator quadratic form matches the closed multiplier.

void criterion_c5() {
  double worst = 0.0;
  for (double rho : {0.5, 0.75}) {
    const GridSpec g(1, 64, 16.0);
    const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(rho), PotentialSpec{});
    const ConjugateOperator a = build_conjugate(g, rho, ConjugateKind::weighted);
    worst = std::max(worst, free_commutator_identity_check(h, a).max_rel_error);
  }
  report("C5", worst <= 1e-6,
         "free Mourre identity on interior packets, rho in {0.5,0.75}, N=64: max rel err " +
             fmtg(worst) + " (tol 1e-6)");
}

// ---------------------------------------------------------------------------
// C6: Mourre constant formula and the localized bound with a long-range tail.

void criterion_c6() {
  // Free window (1,2) at rho = 1/2: c_theory = 2/3 from the formula.
  const GridSpec gf(1, 64, 32.0);
  const HamiltonianHandle hf = HamiltonianHandle::make(gf, FractionalSymbol(0.5), PotentialSpec{});
  const Eigen::MatrixXcd hfd = assemble_dense(hf);
  const SpectralDecomposition df = diagonalize(hfd);
  const ConjugateOperator af = build_conjugate(gf, 0.5, ConjugateKind::weighted);
  const MourreReport free_rep = mourre_lower_bound(hf, hfd, af, 1.0, 2.0, df);
  const double c_err = std::abs(free_rep.c_theory - 2.0 / 3.0);

  // Shallow long-range potential, dense N=256.
  const GridSpec gl(1, 256, 32.0);
  PotentialSpec pot;
  pot.long_range = LongPart{0.05, 1.0};
  const HamiltonianHandle hl = HamiltonianHandle::make(gl, FractionalSymbol(0.5), pot);
  const Eigen::MatrixXcd hld = assemble_dense(hl);
  const SpectralDecomposition dl = diagonalize(hld);
  const ConjugateOperator al = build_conjugate(gl, 0.5, ConjugateKind::weighted);
  const MourreReport lr = mourre_lower_bound(hl, hld, al, 1.0, 2.0, dl);

  const bool ok = c_err <= 1e-6 && lr.margin >= -0.05 && lr.probes_used >= 1;
  report("C6", ok,
         "Mourre constant c_theory(1/2;1,2): err " + fmtg(c_err) +
             " (tol 1e-6); long-range localized min margin " + fmtg(lr.margin) +
             " over " + std::to_string(lr.probes_used) + " probes (floor -0.05)");
}

// ---------------------------------------------------------------------------
// C7: velocity-bound plateaus over the documented probe family.
//
// Family: origin-centered Gaussian packets, widths {1.5, 2, 2.5, 3, 4},
// carrier momenta {0.8, 1.0, 1.3}; rho = 1/2, N = 1024, half-width 256;
// band filter f = bump(0.05, 0.2, 0.7, 1.0) in energy.  Windows:
// minimal theta0 = 0.1 (T = 50), middle [0.05, 0.45) (T = 50), maximal
// [60, 120) (T = 100).  The box and the window floor absorb the smooth
// filter's position-space tails (Gevrey decay exp(-c sqrt(w |x|)) with the
// transition width w), keeping every boundary row under 1e-8 and the
// forbidden-window integral at the 1e-9 scale.

struct C7Numbers {
  double minimal_ratio = 0.0;
  double maximal_total = 0.0;
  double middle_ratio = 0.0;
  double boundary = 0.0;
  bool flagged = false;
};

double plateau_ratio(const ExperimentReport& rep, double T) {
  const double iT = rep.cumulative_at(T);
  const double i2T = rep.cumulative_at(2.0 * T);
  if (iT > 0.0) return i2T / iT - 1.0;
  return i2T <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

void criterion_c7() {
  const GridSpec g(1, 1024, 256.0);
  const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(0.5), PotentialSpec{});
  const SmoothCutoff f = make_bump(0.05, 0.2, 0.7, 1.0);
  VelocityExperimentSetup setup;  // multiplier backend, V = 0

  C7Numbers w;
  int states = 0;
  for (double sigma : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (double xi0 : {0.8, 1.0, 1.3}) {
      const WaveFunction phi = gaussian_packet(g, {0, 0, 0}, {xi0, 0, 0}, sigma);
      ++states;

      const ExperimentReport mn = minimal_bound_integral(h, f, 0.1, phi, 50.0, setup, {});
      const ExperimentReport mx =
          maximal_bound_integral(h, f, 60.0, 120.0, phi, 100.0, setup, {});
      const ExperimentReport md =
          middle_bound_integral(h, f, 0.05, 0.45, phi, 50.0, setup, {});

      w.flagged = w.flagged || mn.flagged || mx.flagged || md.flagged;
      for (const ExperimentReport* rep : {&mn, &mx, &md})
        for (const auto& row : rep->rows) w.boundary = std::max(w.boundary, row.boundary_mass);

      w.minimal_ratio = std::max(w.minimal_ratio, plateau_ratio(mn, 50.0));
      w.maximal_total =
          std::max(w.maximal_total, mx.rows.empty() ? 0.0 : mx.rows.back().cumulative);
      w.middle_ratio = std::max(w.middle_ratio, plateau_ratio(md, 50.0));
    }
  }

  const bool ok = !w.flagged && w.minimal_ratio <= 0.05 && w.maximal_total <= 1e-6 &&
                  w.middle_ratio <= 0.1 && w.boundary <= 1e-8;
  report("C7", ok,
         "velocity plateaus over " + std::to_string(states) +
             " probe states: minimal ratio " + fmtg(w.minimal_ratio) +
             " (tol 0.05), maximal total " + fmtg(w.maximal_total) +
             " (tol 1e-6), middle ratio " + fmtg(w.middle_ratio) +
             " (tol 0.1), boundary " + fmtg(w.boundary) + " (tol 1e-8)" +
             (w.flagged ? ", FLAGGED" : ""));
}

// ---------------------------------------------------------------------------
// C8: commutator expansion remainder decay.

void criterion_c8() {
  const GridSpec g(1, 256, 64.0);
  const SmoothCutoff chi = make_bump(-1.0, -0.5, 0.5, 1.0);
  // Start at t=2: the t=1 transition zone spans only two cells at this
  // resolution, which suppresses the norm and flattens the fitted slope.
  const std::vector<double> times{2.0, 2.83, 4.0, 5.66, 8.0, 11.31, 16.0};
  const RemainderDecay half = commutator_remainder_decay(g, FractionalSymbol(0.5), chi, times);
  const RemainderDecay one = commutator_remainder_decay(g, FractionalSymbol(1.0), chi, times);
  const bool ok = !half.at_floor && half.slope <= -1.8 && one.at_floor;
  report("C8", ok,
         "remainder decay: rho=1/2 slope " + fmtg(half.slope) +
             " (need <= -1.8), rho=1 at numerical floor " + (one.at_floor ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// C9: relative-bound split scan.

void criterion_c9() {
  const GridSpec g(1, 512, 16.0);
  const HamiltonianHandle h = HamiltonianHandle::make(g, FractionalSymbol(0.8), PotentialSpec{});
  const std::vector<double> deltas{0.0625, 0.125, 0.25, 0.5, 1.0};

  SingularPart sing;
  sing.kappa = 1.0;
  sing.epsilon = 0.6;
  const std::vector<RelativeBoundPoint> pts = relative_bound_probe(h, sing, deltas);
  bool monotone = pts.size() == deltas.size();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    monotone = monotone && pts[i].epsilon_eff < pts[i + 1].epsilon_eff;

  const std::vector<double> zero_field(g.size(), 0.0);
  const std::vector<RelativeBoundPoint> zs = relative_bound_probe(h, zero_field, deltas);
  bool zero_exact = zs.size() == deltas.size();
  for (const auto& p : zs) zero_exact = zero_exact && p.epsilon_eff == 0.0 && p.c_eff == 0.0;

  std::string eps_list;
  for (const auto& p : pts) eps_list += (eps_list.empty() ? "" : ",") + fmtg(p.epsilon_eff);
  report("C9", monotone && zero_exact,
         "relative bound, softened Coulomb rho=0.8 eps=0.6 over 4 octaves: epsilon_eff {" +
             eps_list + "} decreasing toward finer splits " + (monotone ? "yes" : "NO") +
             "; zero potential gives exactly (0,0) " + (zero_exact ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// C10: the three admissibility table rows.

void criterion_c10() {
  bool ok = true;
  std::string detail;

  auto row = [&](double rho, int dim, double kappa, double eps, bool admissible,
                 double p_low, double p_high, bool p_point) {
    PotentialSpec spec;
    SingularPart sing;
    sing.kappa = kappa;
    sing.epsilon = eps;
    spec.sing = sing;
    const Admissibility adm = admissibility_check(spec, rho, dim);
    const bool good = adm.admissible == admissible &&
                      (!admissible ||
                       (std::abs(adm.p_low - p_low) <= 1e-12 &&
                        std::abs(adm.p_high - p_high) <= 1e-12 && adm.p_point == p_point));
    ok = ok && good;
    if (!detail.empty()) detail += "; ";
    detail += "(rho=" + fmtg(rho) + ",n=" + std::to_string(dim) + ",eps=" + fmtg(eps) +
              ")->" + (good ? "ok" : "WRONG");
  };

  row(0.8, 3, 1.0, 0.0, true, 2.0, 2.0, true);              // p = 2 point range
  row(0.6, 3, 1.0, 0.0, true, 2.5, 3.0, false);             // p in (n/(2 rho), n)
  row(0.3, 1, 1.0, 0.5, true, 1.0 / 0.6, 2.0, false);       // softened: (n/(2 rho), n/(1-eps))
  report("C10", ok, "admissibility table rows: " + detail);
}

// ---------------------------------------------------------------------------
// C11: refinement-stable negative spectrum of the 1D well.

void criterion_c11() {
  PotentialSpec pot;
  pot.short_range = ShortPart{-1.0, 1.5, ShortProfile::bump};
  const GridSpec gc(1, 256, 16.0), gfine(1, 512, 16.0);
  const HamiltonianHandle hc = HamiltonianHandle::make(gc, FractionalSymbol(0.5), pot);
  const HamiltonianHandle hf = HamiltonianHandle::make(gfine, FractionalSymbol(0.5), pot);
  const SpectralDecomposition dc = diagonalize(assemble_dense(hc));
  const SpectralDecomposition dfine = diagonalize(assemble_dense(hf));
  const PointSpectrumReport rep =
      point_spectrum_report(hc, dc, hf, dfine, -(hc.potential_max_abs() + 1.0), 0.0);

  double max_drift = 0.0;
  for (const auto& b : rep.matched) max_drift = std::max(max_drift, b.drift);
  const bool ok = !rep.matched.empty() && rep.unmatched_coarse == 0 &&
                  rep.unmatched_fine == 0 && max_drift <= 0.05 && !rep.band_edge_flag;
  report("C11", ok,
         "1D well negative spectrum, N=256 vs 512: " + std::to_string(rep.matched.size()) +
             " state(s), max refinement drift " + fmtg(max_drift) +
             " (tol 0.05), unmatched " +
             std::to_string(rep.unmatched_coarse + rep.unmatched_fine));
}

// ---------------------------------------------------------------------------
// C12: convex localizer construction.

void criterion_c12() {
  bool closure_ok = true, deriv_ok = true, grad_ok = true;
  double worst_closure = 0.0;
  std::mt19937_64 rng(77);
  for (double theta : {0.5, 1.0, 2.0}) {
    const RFunction R(theta);
    const double t2 = theta * theta;
    worst_closure = std::max(worst_closure, std::abs(R.r(t2) - t2 / 2.0));
    closure_ok = closure_ok && std::abs(R.r(t2) - t2 / 2.0) <= 1e-12;
    closure_ok = closure_ok && R.shift() > t2 / 4.0 && R.shift() < 5.0 * t2 / 8.0;

    std::uniform_real_distribution<double> sdist(0.0, 4.0 * t2);
    for (int i = 0; i < 10000; ++i) {
      const double s = sdist(rng);
      deriv_ok = deriv_ok && R.r1(s) >= 0.0 && R.r2(s) >= 0.0;
    }

    std::uniform_real_distribution<double> xdist(theta * 1.000001, 10.0 * theta);
    for (int i = 0; i < 100; ++i) {
      const std::array<double, 3> x{xdist(rng), 0.0, 0.0};
      const std::array<double, 3> gr = R.gradR(x, 1);
      grad_ok = grad_ok && gr[0] == x[0] && gr[1] == 0.0 && gr[2] == 0.0;
    }
  }
  report("C12", closure_ok && deriv_ok && grad_ok,
         "localizer closure |r(theta^2)-theta^2/2| max " + fmtg(worst_closure) +
             " (tol 1e-12); r',r'' >= 0 on 10^4 samples " + (deriv_ok ? "yes" : "NO") +
             "; grad R(x)=x beyond theta exactly " + (grad_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// C13: re-running every config reproduces byte-identical CSVs.

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> csv_snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().extension() == ".csv")
      out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

int run_cli(const std::string& cli, const fs::path& config, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" + cli + "' run '" +
                          config.string() + "' >> run.log 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_c13(const std::string& cli, const std::string& configs_dir) {
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(configs_dir))
    if (e.path().extension() == ".ini") configs.push_back(e.path());
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    report("C13", false, "determinism: no configs found in " + configs_dir);
    return;
  }

  const fs::path scratch =
      fs::temp_directory_path() / ("velobound_accept_" + std::to_string(::getpid()));
  fs::remove_all(scratch);

  bool ok = true;
  std::string detail;
  int files = 0;
  for (const auto& cfg : configs) {
    const fs::path dir = scratch / cfg.stem();
    fs::create_directories(dir);
    const int rc1 = run_cli(cli, fs::absolute(cfg), dir);
    const auto snap1 = csv_snapshot(dir);
    const int rc2 = run_cli(cli, fs::absolute(cfg), dir);
    const auto snap2 = csv_snapshot(dir);

    std::string why;
    if (rc1 != 0 || rc2 != 0)
      why = "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2);
    else if (snap1.empty())
      why = "no CSV produced";
    else if (snap1 != snap2)
      why = "reruns differ";
    if (!why.empty()) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += cfg.stem().string() + ": " + why;
    }
    files += static_cast<int>(snap1.size());
  }
  fs::remove_all(scratch);
  report("C13", ok,
         ok ? "determinism: " + std::to_string(configs.size()) + " configs rerun, " +
                  std::to_string(files) + " CSVs byte-identical, all exits 0"
            : "determinism: " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <velobound-cli> <configs-dir>\n";
    return 64;
  }

  struct Entry {
    const char* id;
    void (*fn)();
  };
  const std::array<Entry, 12> entries{{{"C1", criterion_c1},
                                       {"C2", criterion_c2},
                                       {"C3", criterion_c3},
                                       {"C4", criterion_c4},
                                       {"C5", criterion_c5},
                                       {"C6", criterion_c6},
                                       {"C7", criterion_c7},
                                       {"C8", criterion_c8},
                                       {"C9", criterion_c9},
                                       {"C10", criterion_c10},
                                       {"C11", criterion_c11},
                                       {"C12", criterion_c12}}};
  for (const auto& e : entries) {
    try {
      e.fn();
    } catch (const std::exception& ex) {
      report_exception(e.id, ex);
    }
  }
  try {
    criterion_c13(argv[1], argv[2]);
  } catch (const std::exception& ex) {
    report_exception("C13", ex);
  }

  std::cout << "acceptance: " << (13 - g_failures) << "/13 criteria passed" << std::endl;
  return g_failures;
}
