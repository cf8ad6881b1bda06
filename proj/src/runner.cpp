#include "velobound/runner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "velobound/config.hpp"
#include "velobound/conjugate.hpp"
#include "velobound/cutoff.hpp"
#include "velobound/grid.hpp"
#include "velobound/hamiltonian.hpp"
#include "velobound/observables.hpp"
#include "velobound/operator_function.hpp"
#include "velobound/potential.hpp"
#include "velobound/propagator.hpp"
#include "velobound/report.hpp"
#include "velobound/state.hpp"
#include "velobound/svg.hpp"
#include "velobound/symbol.hpp"

namespace velobound {

namespace {

constexpr std::size_t kDenseCap = 4096;

std::string fmt(double v) { return format_number(v); }

// ---------------------------------------------------------------------------
// Shared setup parsed once per config.

struct SharedSetup {
  GridSpec grid;
  FractionalSymbol sym;
  PotentialSpec pot;
  const ConfigSection* state_sec = nullptr;
  const ConfigSection* cutoff_sec = nullptr;
  std::string out_dir = "out";
  bool want_svg = false;
};

std::string describe_potential(const PotentialSpec& p) {
  if (p.empty()) return "zero";
  std::string s;
  auto add = [&s](const char* tag) {
    if (!s.empty()) s += '+';
    s += tag;
  };
  if (p.sing) add("sing");
  if (p.short_range) add("short");
  if (p.long_range) add("long");
  if (p.custom) add("custom");
  return s;
}

PotentialSpec parse_potential(const ConfigFile& cfg) {
  PotentialSpec spec;
  const ConfigSection* sec = cfg.find("potential");
  if (!sec) return spec;
  if (sec->has("sing_kappa")) {
    SingularPart sp;
    sp.kappa = sec->require_double("sing_kappa");
    sp.epsilon = sec->get_double("sing_epsilon", 0.0);
    sp.cutoff_radius = sec->get_double("sing_cutoff_radius", 1.0);
    sp.gamma_sing = sec->get_double("sing_gamma", 1.5);
    sp.mollify_radius = sec->get_double("sing_mollify_radius", 1e-3);
    spec.sing = sp;
  }
  if (sec->has("short_amplitude")) {
    ShortPart sp;
    sp.amplitude = sec->require_double("short_amplitude");
    sp.gamma_short = sec->get_double("short_gamma", 1.5);
    const std::string prof = sec->get_string("short_profile", "power_law");
    if (prof == "power_law")
      sp.profile = ShortProfile::power_law;
    else if (prof == "bump")
      sp.profile = ShortProfile::bump;
    else
      throw ValidationError("[potential] short_profile must be power_law or bump, got '" +
                            prof + "'");
    spec.short_range = sp;
  }
  if (sec->has("long_amplitude")) {
    LongPart lp;
    lp.amplitude = sec->require_double("long_amplitude");
    lp.gamma_long = sec->get_double("long_gamma", 1.0);
    spec.long_range = lp;
  }
  if (!spec.empty()) spec.validate();
  return spec;
}

SharedSetup parse_shared(const ConfigFile& cfg) {
  SharedSetup s;
  const ConfigSection& grid = cfg.require("grid");
  s.grid = GridSpec(static_cast<int>(grid.get_int("dim", 1)),
                    static_cast<int>(grid.require_double("n_points")),
                    grid.require_double("half_width"));
  s.sym = FractionalSymbol(cfg.require("symbol").require_double("rho"));
  s.pot = parse_potential(cfg);
  s.state_sec = cfg.find("state");
  s.cutoff_sec = cfg.find("cutoff");
  if (const ConfigSection* out = cfg.find("output")) {
    s.out_dir = out->get_string("directory", "out");
    auto formats = out->get_string_list("formats");
    if (formats.empty()) formats = {"csv"};
    for (const auto& f : formats) {
      if (f == "svg")
        s.want_svg = true;
      else if (f != "csv")
        throw ValidationError("[output] formats accepts csv and svg only, got '" + f + "'");
    }
  }
  return s;
}

SmoothCutoff parse_bump_key(const ConfigSection& sec, const std::string& key) {
  const auto q = sec.get_double_list(key);
  if (q.size() != 4)
    throw ValidationError("[" + sec.name + "] " + key +
                          " must be a quadruple a,a1,b1,b of support/plateau edges");
  return make_bump(q[0], q[1], q[2], q[3]);
}

SmoothCutoff require_cutoff(const SharedSetup& shared, const std::string& key) {
  if (!shared.cutoff_sec || !shared.cutoff_sec->has(key))
    throw ValidationError("experiment needs [cutoff] " + key + " = a,a1,b1,b");
  return parse_bump_key(*shared.cutoff_sec, key);
}

std::array<double, 3> axis_values(const ConfigSection& sec, const std::string& key, int dim) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  const auto list = sec.get_double_list(key);
  if (static_cast<int>(list.size()) > dim)
    throw ValidationError("[" + sec.name + "] " + key + " lists more than dim components");
  for (std::size_t i = 0; i < list.size(); ++i) out[i] = list[i];
  return out;
}

WaveFunction build_state(const SharedSetup& shared, const SpectralDecomposition* decomp) {
  const ConfigSection* sec = shared.state_sec;
  const std::string kind = sec ? sec->get_string("kind", "packet") : "packet";
  if (kind == "packet") {
    std::array<double, 3> center{0.0, 0.0, 0.0}, momentum{0.0, 0.0, 0.0};
    double sigma = shared.grid.half_width / 8.0;
    if (sec) {
      center = axis_values(*sec, "center", shared.grid.dim);
      momentum = axis_values(*sec, "momentum", shared.grid.dim);
      sigma = sec->get_double("sigma", sigma);
    }
    return gaussian_packet(shared.grid, center, momentum, sigma);
  }
  if (kind == "plane_wave") {
    const long k = sec->get_int("mode", 1);
    const long n = shared.grid.n_points;
    if (std::labs(k) > n / 2)
      throw ValidationError("[state] mode index exceeds the Nyquist index " +
                            std::to_string(n / 2));
    const std::size_t flat = static_cast<std::size_t>(k >= 0 ? k : n + k);
    return plane_wave(shared.grid, flat);
  }
  if (kind == "random") {
    const double band = sec->get_double("xi_band", 0.5 * 3.141592653589793 *
                                                       shared.grid.n_points /
                                                       (2.0 * shared.grid.half_width));
    const auto seed = static_cast<std::uint64_t>(sec->get_int("seed", 1));
    return random_band_limited(shared.grid, band, seed);
  }
  if (kind == "eigenvector") {
    if (!decomp)
      throw ValidationError(
          "[state] kind=eigenvector needs the dense backend (grid within the dense cap)");
    const long idx = sec->get_int("index", 0);
    return eigenvector_state(shared.grid, *decomp, static_cast<int>(idx));
  }
  throw ValidationError("[state] unknown kind '" + kind +
                        "' (packet, plane_wave, random, eigenvector)");
}

// ---------------------------------------------------------------------------
// Per-experiment outcome, assembled by worker threads and printed in order.

struct ExperimentOutcome {
  std::string name;
  std::string kind;
  std::vector<std::string> lines;
  bool flag_violation = false;
  bool assertion_failure = false;
  int passes = 0;
  int fails = 0;
  std::string parse_error;
  std::string validation_error;
  std::string runtime_error_msg;
};

struct Ctx {
  const SharedSetup& shared;
  const ConfigSection& sec;
  bool validate_only;
  ExperimentOutcome& res;

  void line(const std::string& s) const { res.lines.push_back(s); }
  void info(const std::string& s) const { res.lines.push_back("# " + s); }
  void check(const std::string& crit, bool ok, const std::string& detail) const {
    res.lines.push_back((ok ? "PASS [" : "FAIL [") + crit + "] " + res.name + ": " + detail);
    if (ok) {
      ++res.passes;
    } else {
      ++res.fails;
      res.assertion_failure = true;
    }
  }

  std::string csv_path() const {
    return (std::filesystem::path(shared.out_dir) / (res.name + ".csv")).string();
  }
  std::string svg_path() const {
    return (std::filesystem::path(shared.out_dir) / (res.name + ".svg")).string();
  }
  std::string criterion() const { return sec.get_string("criterion", ""); }
  void reject_unknown_criterion(std::initializer_list<const char*> allowed) const {
    const std::string crit = criterion();
    if (crit.empty()) return;
    for (const char* a : allowed)
      if (crit == a) return;
    std::string names;
    for (const char* a : allowed) {
      if (!names.empty()) names += ", ";
      names += a;
    }
    throw ValidationError("experiment '" + res.name + "' (kind=" + res.kind +
                          ") cannot certify criterion " + crit + " (supports: " +
                          (names.empty() ? "none" : names) + ")");
  }
};

void write_report_file(const Ctx& ctx, const std::string& bytes, bool also_svg) {
  write_text_file(ctx.csv_path(), bytes);
  ctx.info("wrote " + ctx.csv_path());
  if (also_svg && ctx.shared.want_svg) {
    write_text_file(ctx.svg_path(), render_experiment_svg(parse_csv(bytes)));
    ctx.info("wrote " + ctx.svg_path());
  }
}

void ensure_dense_cap(const GridSpec& grid, const std::string& who) {
  if (grid.size() > kDenseCap)
    throw ValidationError(who + ": dense realization needs n_points^dim <= " +
                          std::to_string(kDenseCap) + ", got " +
                          std::to_string(grid.size()));
}

std::vector<double> negative_eigenvalues(const SpectralDecomposition& d) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
    if (d.eigenvalues[i] < -1e-12) out.push_back(d.eigenvalues[i]);
  return out;
}

// ---------------------------------------------------------------------------
// kind = evolve

void run_evolve(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C4"});
  const double T = ctx.sec.require_double("T");
  if (!(T > 0.0)) throw ValidationError("[experiment] evolve needs T > 0");
  const double dt = ctx.sec.get_double("dt", 1e-3);
  const long samples = ctx.sec.get_int("samples", 33);
  if (samples < 2) throw ValidationError("[experiment] evolve needs samples >= 2");

  const bool zero_pot = ctx.shared.pot.empty();
  std::string method = ctx.sec.get_string("method", zero_pot ? "multiplier" : "split_step");
  if (method != "multiplier" && method != "dense" && method != "split_step")
    throw ValidationError("[experiment] evolve method must be multiplier, dense or split_step");
  if (method == "multiplier" && !zero_pot)
    throw ValidationError("[experiment] evolve: multiplier method requires V = 0");
  if (method == "dense") ensure_dense_cap(ctx.shared.grid, "evolve");

  if (ctx.validate_only) return;

  const HamiltonianHandle h =
      HamiltonianHandle::make(ctx.shared.grid, ctx.shared.sym, ctx.shared.pot);
  SpectralDecomposition decomp;
  const bool need_dense =
      method == "dense" ||
      (ctx.shared.state_sec && ctx.shared.state_sec->get_string("kind", "packet") ==
                                   "eigenvector");
  if (need_dense) {
    ensure_dense_cap(ctx.shared.grid, "evolve");
    decomp = diagonalize(assemble_dense(h));
  }
  const WaveFunction psi0 = build_state(ctx.shared, need_dense ? &decomp : nullptr);

  std::vector<double> record(samples);
  for (long i = 0; i < samples; ++i) record[i] = T * static_cast<double>(i) / (samples - 1);

  EvolutionTrace trace;
  if (method == "multiplier")
    trace = evolve_free_multiplier(h, psi0, record);
  else if (method == "dense")
    trace = evolve_exact(h, decomp, psi0, record);
  else
    trace = evolve_split_step(h, psi0, T, dt, record);

  write_report_file(ctx, render_trace_csv(trace), false);
  if (!trace.valid) {
    ctx.res.flag_violation = true;
    ctx.info("flagged: " + trace.flag_reason);
  }
  VelocityFit fit;
  if (trace.times.size() >= 2) fit = centroid_velocity(trace);
  ctx.info("method=" + trace.method + " slope0=" + fmt(fit.slope[0]) + " final_boundary=" +
           fmt(trace.boundary.empty() ? 0.0 : trace.boundary.back()));

  if (ctx.criterion() == "C4") {
    if (!ctx.shared.state_sec ||
        ctx.shared.state_sec->get_string("kind", "packet") != "packet")
      throw ValidationError("criterion C4 needs a packet state with a carrier momentum");
    const double xi0 = axis_values(*ctx.shared.state_sec, "momentum", ctx.shared.grid.dim)[0];
    if (xi0 == 0.0) throw ValidationError("criterion C4 needs a nonzero carrier momentum");
    const double expected = 2.0 * xi0 * ctx.shared.sym.deriv1(xi0 * xi0);
    const double tol = ctx.sec.get_double("slope_tol", 0.02);
    const double rel = std::abs(fit.slope[0] - expected) / std::abs(expected);
    ctx.check("C4", trace.valid && rel <= tol,
              "group-velocity slope " + fmt(fit.slope[0]) + " vs 2 xi0 Psi'(xi0^2) = " +
                  fmt(expected) + ", rel err " + fmt(rel) + " (tol " + fmt(tol) + ")");
  }
}

// ---------------------------------------------------------------------------
// kind = spectrum

void run_spectrum(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C2", "C11"});
  const long factor = ctx.sec.get_int("fine_factor", 2);
  if (factor < 2) throw ValidationError("[experiment] spectrum needs fine_factor >= 2");
  ensure_dense_cap(ctx.shared.grid, "spectrum (coarse grid)");
  const GridSpec fine_grid(ctx.shared.grid.dim,
                           ctx.shared.grid.n_points * static_cast<int>(factor),
                           ctx.shared.grid.half_width);
  ensure_dense_cap(fine_grid, "spectrum (fine grid)");

  if (ctx.validate_only) return;

  const HamiltonianHandle h =
      HamiltonianHandle::make(ctx.shared.grid, ctx.shared.sym, ctx.shared.pot);
  const HamiltonianHandle h_fine =
      HamiltonianHandle::make(fine_grid, ctx.shared.sym, ctx.shared.pot);
  const SpectralDecomposition coarse = diagonalize(assemble_dense(h));
  const SpectralDecomposition fine = diagonalize(assemble_dense(h_fine));

  const double window_lo = ctx.sec.get_double("window_lo", -(h.potential_max_abs() + 1.0));
  const double window_hi = ctx.sec.get_double("window_hi", 0.0);
  const PointSpectrumReport rep =
      point_spectrum_report(h, coarse, h_fine, fine, window_lo, window_hi);

  double max_drift = 0.0;
  for (const auto& b : rep.matched) max_drift = std::max(max_drift, std::abs(b.drift));

  std::vector<double> eigenvalues(coarse.eigenvalues.data(),
                                  coarse.eigenvalues.data() + coarse.eigenvalues.size());
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("kind", "spectrum");
  meta.emplace_back("rho", fmt(ctx.shared.sym.rho));
  meta.emplace_back("potential", describe_potential(ctx.shared.pot));
  meta.emplace_back("n_points", std::to_string(ctx.shared.grid.n_points));
  meta.emplace_back("fine_n_points", std::to_string(fine_grid.n_points));
  meta.emplace_back("half_width", fmt(ctx.shared.grid.half_width));
  meta.emplace_back("window_lo", fmt(rep.window_lo));
  meta.emplace_back("window_hi", fmt(rep.window_hi));
  meta.emplace_back("matched", std::to_string(rep.matched.size()));
  meta.emplace_back("unmatched_coarse", std::to_string(rep.unmatched_coarse));
  meta.emplace_back("unmatched_fine", std::to_string(rep.unmatched_fine));
  meta.emplace_back("max_drift", fmt(max_drift));
  meta.emplace_back("band_edge_flag", rep.band_edge_flag ? "1" : "0");
  write_report_file(ctx, render_spectrum_csv(eigenvalues, meta), false);

  ctx.info("matched=" + std::to_string(rep.matched.size()) +
           " max_drift=" + fmt(max_drift) +
           " embedded_candidates=" + std::to_string(rep.embedded_candidates.size()));

  const std::string crit = ctx.criterion();
  if (crit == "C2") {
    if (!h.potential_is_zero()) {
      ctx.check("C2", false, "free-spectrum exactness asserted on a nonzero potential");
      return;
    }
    std::vector<double> expect = h.kinetic;
    std::sort(expect.begin(), expect.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < expect.size(); ++i)
      worst = std::max(worst, std::abs(expect[i] - eigenvalues[i]));
    const double tol = ctx.sec.get_double("free_tol", 1e-10);
    ctx.check("C2", worst <= tol,
              "free spectrum multiset error " + fmt(worst) + " (tol " + fmt(tol) + ")");
  } else if (crit == "C11") {
    const double tol = ctx.sec.get_double("drift_tol", 0.05);
    const bool stable = !rep.matched.empty() && max_drift <= tol &&
                        rep.unmatched_coarse == 0 && rep.unmatched_fine == 0 &&
                        !rep.band_edge_flag;
    ctx.check("C11", stable,
              std::to_string(rep.matched.size()) + " bound state(s), max refinement drift " +
                  fmt(max_drift) + " (tol " + fmt(tol) + "), unmatched " +
                  std::to_string(rep.unmatched_coarse) + "/" +
                  std::to_string(rep.unmatched_fine));
  }
}

// ---------------------------------------------------------------------------
// kind = mourre

void run_mourre(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C5", "C6"});
  const double lambda1 = ctx.sec.require_double("lambda1");
  const double lambda2 = ctx.sec.require_double("lambda2");
  const std::string ckind = ctx.sec.get_string("conjugate", "weighted");
  if (ckind != "weighted" && ckind != "dilation")
    throw ValidationError("[experiment] mourre conjugate must be weighted or dilation");
  ensure_dense_cap(ctx.shared.grid, "mourre");

  bool has_g = ctx.shared.cutoff_sec && ctx.shared.cutoff_sec->has("g");
  SmoothCutoff g_override;
  if (has_g) g_override = parse_bump_key(*ctx.shared.cutoff_sec, "g");

  if (ctx.validate_only) return;

  const HamiltonianHandle h =
      HamiltonianHandle::make(ctx.shared.grid, ctx.shared.sym, ctx.shared.pot);
  const Eigen::MatrixXcd h_dense = assemble_dense(h);
  const SpectralDecomposition decomp = diagonalize(h_dense);
  const ConjugateOperator a =
      build_conjugate(ctx.shared.grid, ctx.shared.sym.rho,
                      ckind == "weighted" ? ConjugateKind::weighted : ConjugateKind::dilation);

  const MourreReport rep = mourre_lower_bound(h, h_dense, a, lambda1, lambda2, decomp,
                                              has_g ? &g_override : nullptr);
  write_report_file(ctx, render_mourre_csv(rep), false);
  ctx.info("c_theory=" + fmt(rep.c_theory) + " observed_min=" + fmt(rep.observed_min) +
           " margin=" + fmt(rep.margin) + " probes=" + std::to_string(rep.probes_used) + "/" +
           std::to_string(rep.probes_used + rep.probes_skipped));

  const std::string crit = ctx.criterion();
  if (crit == "C5") {
    if (!h.potential_is_zero()) {
      ctx.check("C5", false, "free commutator identity asserted on a nonzero potential");
      return;
    }
    const double tol = ctx.sec.get_double("identity_tol", 1e-6);
    const FreeCommutatorCheck fc = free_commutator_identity_check(h, a);
    ctx.check("C5", fc.max_rel_error <= tol,
              "free commutator identity on " + std::to_string(fc.rows.size()) +
                  " packets, max rel err " + fmt(fc.max_rel_error) + " (tol " + fmt(tol) +
                  ")");
  } else if (crit == "C6") {
    bool ok = true;
    std::string detail;
    if (ctx.sec.has("expect_c_theory")) {
      const double expect = ctx.sec.require_double("expect_c_theory");
      const double ctol = ctx.sec.get_double("c_theory_tol", 1e-6);
      const bool c_ok = std::abs(rep.c_theory - expect) <= ctol;
      ok = ok && c_ok;
      detail += "c_theory " + fmt(rep.c_theory) + " vs " + fmt(expect) + " (tol " +
                fmt(ctol) + "); ";
    }
    const double floor = ctx.sec.get_double("margin_floor", -0.05);
    ok = ok && rep.margin >= floor;
    detail += "observed_min - localized_bound = " + fmt(rep.margin) + " (floor " +
              fmt(floor) + ")";
    ctx.check("C6", ok, detail);
  }
}

// ---------------------------------------------------------------------------
// kinds minimal / maximal / middle

void run_velocity(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C7"});
  const std::string& kind = ctx.res.kind;
  const double T = ctx.sec.require_double("T");
  const SmoothCutoff f = require_cutoff(ctx.shared, "f");

  double theta0 = 0.0, Theta = 0.0, theta = 0.0, theta1 = 0.0, theta2 = 0.0;
  if (kind == "minimal") {
    theta0 = ctx.sec.require_double("theta0");
  } else if (kind == "maximal") {
    Theta = ctx.sec.require_double("Theta");
    theta = ctx.sec.require_double("theta");
  } else {
    theta1 = ctx.sec.require_double("theta1");
    theta2 = ctx.sec.require_double("theta2");
  }

  const bool zero_pot = ctx.shared.pot.empty();
  const bool cap_ok = ctx.shared.grid.size() <= kDenseCap;
  std::string backend = ctx.sec.get_string(
      "backend", zero_pot ? "multiplier" : (cap_ok ? "dense" : "split_step"));
  if (backend != "multiplier" && backend != "dense" && backend != "split_step")
    throw ValidationError(
        "[experiment] backend must be multiplier, dense or split_step, got '" + backend +
        "'");
  if (backend == "multiplier" && !zero_pot)
    throw ValidationError("[experiment] multiplier backend requires V = 0");
  if (backend == "dense") ensure_dense_cap(ctx.shared.grid, kind);

  // Cheap kinematic preconditions, mirrored from the integral routines so
  // `validate` can reject bad setups without running them.
  const BandKinematics kin = band_kinematics(ctx.shared.grid, ctx.shared.sym, f);
  if (kin.modes == 0)
    throw ValidationError(kind + ": supp f contains no lattice mode energy");
  if (ctx.shared.grid.half_width < 2.0 * kin.v_max * T)
    throw ValidationError(kind + ": precondition violated: horizon half_width >= 2 v_max T" +
                          " requires " + fmt(2.0 * kin.v_max * T) + ", got " +
                          fmt(ctx.shared.grid.half_width));
  if (kind == "maximal" && !(Theta > kin.v_max))
    throw ValidationError("maximal: precondition violated: Theta must exceed C_f = " +
                          fmt(kin.v_max));

  if (ctx.validate_only) return;

  const HamiltonianHandle h =
      HamiltonianHandle::make(ctx.shared.grid, ctx.shared.sym, ctx.shared.pot);

  SpectralDecomposition decomp;
  bool have_decomp = false;
  std::vector<double> pp;
  if (!zero_pot) {
    if (ctx.sec.has("pp_values")) {
      pp = ctx.sec.get_double_list("pp_values");
    } else if (cap_ok) {
      decomp = diagonalize(assemble_dense(h));
      have_decomp = true;
      pp = negative_eigenvalues(decomp);
    } else {
      throw ValidationError(kind +
                            ": nonzero potential beyond the dense cap needs an explicit "
                            "pp_values list to certify supp f avoids the point spectrum");
    }
  }
  if (backend == "dense" && !have_decomp) {
    decomp = diagonalize(assemble_dense(h));
    have_decomp = true;
    if (!zero_pot && !ctx.sec.has("pp_values")) pp = negative_eigenvalues(decomp);
  }

  VelocityExperimentSetup setup;
  setup.backend = backend == "multiplier" ? VelocityExperimentSetup::Backend::multiplier
                  : backend == "dense"    ? VelocityExperimentSetup::Backend::dense
                                          : VelocityExperimentSetup::Backend::split_step;
  setup.dt = ctx.sec.get_double("dt", 1e-3);
  setup.decomp = have_decomp ? &decomp : nullptr;
  setup.potential_id = describe_potential(ctx.shared.pot);

  const WaveFunction phi = build_state(ctx.shared, have_decomp ? &decomp : nullptr);

  ExperimentReport rep;
  if (kind == "minimal")
    rep = minimal_bound_integral(h, f, theta0, phi, T, setup, pp);
  else if (kind == "maximal")
    rep = maximal_bound_integral(h, f, Theta, theta, phi, T, setup, pp);
  else
    rep = middle_bound_integral(h, f, theta1, theta2, phi, T, setup, pp);

  write_report_file(ctx, render_experiment_csv(rep), true);
  if (rep.flagged) {
    ctx.res.flag_violation = true;
    ctx.info("flagged: " + rep.flag_reason);
  }

  if (kind == "maximal") {
    const double total = !rep.flagged ? rep.cumulative_at(T)
                         : rep.rows.empty() ? 0.0
                                            : rep.rows.back().cumulative;
    ctx.info("I(T)=" + fmt(total));
    if (ctx.criterion() == "C7") {
      const double cap = ctx.sec.get_double("max_integral", 1e-6);
      ctx.check("C7", !rep.flagged && total <= cap,
                "forbidden-window integral I(T) = " + fmt(total) + " (cap " + fmt(cap) +
                    (rep.flagged ? "), flagged: " + rep.flag_reason : ")"));
    }
  } else {
    const double plateau_default = kind == "minimal" ? 0.05 : 0.1;
    double iT = 0.0, i2T = 0.0, ratio = 0.0;
    if (!rep.flagged) {
      iT = rep.cumulative_at(T);
      i2T = rep.cumulative_at(2.0 * T);
      ratio = iT > 0.0 ? i2T / iT - 1.0 : (i2T <= 1e-12 ? 0.0 : 1e300);
    }
    ctx.info("I(T)=" + fmt(iT) + " I(2T)=" + fmt(i2T) + " growth=" + fmt(ratio));
    if (ctx.criterion() == "C7") {
      const double tol = ctx.sec.get_double("plateau_tol", plateau_default);
      ctx.check("C7", !rep.flagged && ratio <= tol,
                "plateau growth I(2T)/I(T) - 1 = " + fmt(ratio) + " (tol " + fmt(tol) +
                    (rep.flagged ? "), flagged: " + rep.flag_reason : ")"));
    }
  }
}

// ---------------------------------------------------------------------------
// kind = remainder

void run_remainder(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C8"});
  std::vector<double> times = ctx.sec.get_double_list("times");
  if (times.empty()) times = {1.0, 2.0, 4.0, 8.0, 16.0};
  SmoothCutoff chi{-1.0, -0.5, 0.5, 1.0};
  if (ctx.shared.cutoff_sec && ctx.shared.cutoff_sec->has("chi"))
    chi = parse_bump_key(*ctx.shared.cutoff_sec, "chi");
  ensure_dense_cap(ctx.shared.grid, "remainder");
  const std::string expect = ctx.sec.get_string("expect", "");
  if (!expect.empty() && expect != "slope" && expect != "floor")
    throw ValidationError("[experiment] remainder expect must be slope or floor");

  if (ctx.validate_only) return;

  const RemainderDecay rd =
      commutator_remainder_decay(ctx.shared.grid, ctx.shared.sym, chi, times);

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("kind", "remainder");
  meta.emplace_back("rho", fmt(ctx.shared.sym.rho));
  meta.emplace_back("n_points", std::to_string(ctx.shared.grid.n_points));
  meta.emplace_back("half_width", fmt(ctx.shared.grid.half_width));
  meta.emplace_back("chi", fmt(chi.a) + ";" + fmt(chi.a1) + ";" + fmt(chi.b1) + ";" +
                               fmt(chi.b));
  write_report_file(ctx, render_remainder_csv(rd, meta), false);
  ctx.info("slope=" + fmt(rd.slope) + " at_floor=" + (rd.at_floor ? std::string("1")
                                                                  : std::string("0")));

  if (ctx.criterion() == "C8") {
    if (expect == "floor") {
      ctx.check("C8", rd.at_floor, "remainder at numerical floor: " +
                                       std::string(rd.at_floor ? "yes" : "no") +
                                       ", largest norm " + fmt(rd.norms.empty()
                                                                   ? 0.0
                                                                   : *std::max_element(
                                                                         rd.norms.begin(),
                                                                         rd.norms.end())));
    } else if (expect == "slope") {
      const double slope_max = ctx.sec.get_double("slope_max", -1.8);
      ctx.check("C8", !rd.at_floor && rd.slope <= slope_max,
                "fitted log-log slope " + fmt(rd.slope) + " (required <= " + fmt(slope_max) +
                    ")");
    } else {
      throw ValidationError("criterion C8 needs expect = slope or expect = floor");
    }
  }
}

// ---------------------------------------------------------------------------
// kind = relbound

void run_relbound(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C9"});
  const std::vector<double> deltas = ctx.sec.get_double_list("deltas");
  if (deltas.empty())
    throw ValidationError("[experiment] relbound needs a deltas list");
  if (!std::is_sorted(deltas.begin(), deltas.end()))
    throw ValidationError("[experiment] relbound deltas must be ascending");
  const auto seed = static_cast<std::uint64_t>(ctx.sec.get_int("seed", 2026));
  const std::string expect = ctx.sec.get_string("expect", "");
  if (!expect.empty() && expect != "monotone" && expect != "zero")
    throw ValidationError("[experiment] relbound expect must be monotone or zero");

  if (ctx.validate_only) return;

  const HamiltonianHandle h =
      HamiltonianHandle::make(ctx.shared.grid, ctx.shared.sym, ctx.shared.pot);

  std::vector<RelativeBoundPoint> points;
  if (ctx.shared.pot.sing) {
    points = relative_bound_probe(h, *ctx.shared.pot.sing, deltas, seed);
  } else {
    const std::vector<double> zero_field(ctx.shared.grid.size(), 0.0);
    points = relative_bound_probe(h, zero_field, deltas, seed);
  }

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("kind", "relbound");
  meta.emplace_back("rho", fmt(ctx.shared.sym.rho));
  meta.emplace_back("potential", describe_potential(ctx.shared.pot));
  if (ctx.shared.pot.sing) {
    meta.emplace_back("kappa", fmt(ctx.shared.pot.sing->kappa));
    meta.emplace_back("epsilon", fmt(ctx.shared.pot.sing->epsilon));
  }
  meta.emplace_back("n_points", std::to_string(ctx.shared.grid.n_points));
  meta.emplace_back("half_width", fmt(ctx.shared.grid.half_width));
  meta.emplace_back("seed", std::to_string(seed));
  write_report_file(ctx, render_relbound_csv(points, meta), false);

  std::string values = "epsilon_eff:";
  for (const auto& p : points) values += " " + fmt(p.epsilon_eff);
  ctx.info(values);

  if (ctx.criterion() == "C9") {
    if (expect == "zero") {
      bool all_zero = true;
      for (const auto& p : points)
        all_zero = all_zero && p.epsilon_eff == 0.0 && p.c_eff == 0.0;
      ctx.check("C9", all_zero, "V_sing = 0 gives exactly (epsilon_eff, c_eff) = (0, 0): " +
                                    std::string(all_zero ? "yes" : "no"));
    } else if (expect == "monotone") {
      // epsilon_eff shrinks as the split frequency grows, i.e. grows with
      // delta; the listed deltas are ascending.
      bool monotone = true;
      for (std::size_t i = 0; i + 1 < points.size(); ++i)
        monotone = monotone && points[i].epsilon_eff < points[i + 1].epsilon_eff;
      ctx.check("C9", monotone && points.size() >= 2,
                "epsilon_eff strictly decreasing toward finer splits across " +
                    std::to_string(points.size()) + " deltas: " +
                    (monotone ? "yes" : "no"));
    } else {
      throw ValidationError("criterion C9 needs expect = monotone or expect = zero");
    }
  }
}

// ---------------------------------------------------------------------------
// kind = admissibility

void run_admissibility(const Ctx& ctx) {
  ctx.reject_unknown_criterion({"C10"});
  const std::string expect_verdict = ctx.sec.get_string("expect_verdict", "");
  if (!expect_verdict.empty() && expect_verdict != "admissible" &&
      expect_verdict != "inadmissible")
    throw ValidationError(
        "[experiment] admissibility expect_verdict must be admissible or inadmissible");

  if (ctx.validate_only) return;

  const Admissibility adm =
      admissibility_check(ctx.shared.pot, ctx.shared.sym.rho, ctx.shared.grid.dim);

  std::string bytes = "# velobound v1\n";
  bytes += "# kind=admissibility\n";
  bytes += "# rho=" + fmt(ctx.shared.sym.rho) + "\n";
  bytes += "# dim=" + std::to_string(ctx.shared.grid.dim) + "\n";
  if (ctx.shared.pot.sing) {
    bytes += "# kappa=" + fmt(ctx.shared.pot.sing->kappa) + "\n";
    bytes += "# epsilon=" + fmt(ctx.shared.pot.sing->epsilon) + "\n";
  }
  bytes += "# verdict=" + std::string(adm.admissible ? "admissible" : "inadmissible") + "\n";
  bytes += "# reason=" + adm.reason + "\n";
  bytes += "admissible,p_low,p_high,p_point\n";
  bytes += std::string(adm.admissible ? "1" : "0") + "," + fmt(adm.p_low) + "," +
           fmt(adm.p_high) + "," + (adm.p_point ? "1" : "0") + "\n";
  write_report_file(ctx, bytes, false);
  ctx.info("verdict=" + std::string(adm.admissible ? "admissible" : "inadmissible") +
           " p=(" + fmt(adm.p_low) + ", " + fmt(adm.p_high) + ")" +
           (adm.p_point ? " point" : "") + " reason=" + adm.reason);

  if (ctx.criterion() == "C10") {
    if (expect_verdict.empty())
      throw ValidationError("criterion C10 needs expect_verdict");
    bool ok = adm.admissible == (expect_verdict == "admissible");
    std::string detail = "verdict " +
                         std::string(adm.admissible ? "admissible" : "inadmissible") +
                         " (expected " + expect_verdict + ")";
    if (ctx.sec.has("expect_p_low")) {
      const double lo = ctx.sec.require_double("expect_p_low");
      ok = ok && std::abs(adm.p_low - lo) <= 1e-12;
      detail += ", p_low " + fmt(adm.p_low) + " vs " + fmt(lo);
    }
    if (ctx.sec.has("expect_p_high")) {
      const double hi = ctx.sec.require_double("expect_p_high");
      ok = ok && std::abs(adm.p_high - hi) <= 1e-12;
      detail += ", p_high " + fmt(adm.p_high) + " vs " + fmt(hi);
    }
    if (ctx.sec.has("expect_p_point")) {
      const bool pt = ctx.sec.get_bool("expect_p_point", false);
      ok = ok && adm.p_point == pt;
      detail += ", point-range " + std::string(adm.p_point ? "yes" : "no");
    }
    ctx.check("C10", ok, detail);
  }
}

// ---------------------------------------------------------------------------
// kind = dilation

void run_dilation(const Ctx& ctx) {
  ctx.reject_unknown_criterion({});
  if (!ctx.shared.pot.long_range || ctx.shared.pot.sing || ctx.shared.pot.short_range ||
      ctx.shared.pot.custom)
    throw ValidationError(
        "[experiment] dilation needs a purely long-range potential (long_amplitude only)");
  ensure_dense_cap(ctx.shared.grid, "dilation");

  if (ctx.validate_only) return;

  const HamiltonianHandle h =
      HamiltonianHandle::make(ctx.shared.grid, ctx.shared.sym, ctx.shared.pot);
  const DilationCheck dc = dilation_commutator_check(h, *ctx.shared.pot.long_range);

  std::string bytes = "# velobound v1\n";
  bytes += "# kind=dilation\n";
  bytes += "# rho=" + fmt(ctx.shared.sym.rho) + "\n";
  bytes += "# amplitude=" + fmt(ctx.shared.pot.long_range->amplitude) + "\n";
  bytes += "# gamma=" + fmt(ctx.shared.pot.long_range->gamma_long) + "\n";
  bytes += "# n_points=" + std::to_string(ctx.shared.grid.n_points) + "\n";
  bytes += "max_residual,scalar_min_margin\n";
  bytes += fmt(dc.max_residual) + "," + fmt(dc.scalar_min_margin) + "\n";
  write_report_file(ctx, bytes, false);
  ctx.info("max_residual=" + fmt(dc.max_residual) +
           " scalar_min_margin=" + fmt(dc.scalar_min_margin));
}

// ---------------------------------------------------------------------------
// Dispatch and orchestration.

void execute_section(const SharedSetup& shared, const ConfigSection& sec,
                     const std::string& name, bool validate_only, ExperimentOutcome& res) {
  res.name = name;
  res.kind = sec.get_string("kind", "");
  const Ctx ctx{shared, sec, validate_only, res};
  try {
    if (res.kind.empty())
      throw ValidationError("section [" + sec.name + "] is missing required key 'kind'");
    if (res.kind == "evolve")
      run_evolve(ctx);
    else if (res.kind == "spectrum")
      run_spectrum(ctx);
    else if (res.kind == "mourre")
      run_mourre(ctx);
    else if (res.kind == "minimal" || res.kind == "maximal" || res.kind == "middle")
      run_velocity(ctx);
    else if (res.kind == "remainder")
      run_remainder(ctx);
    else if (res.kind == "relbound")
      run_relbound(ctx);
    else if (res.kind == "admissibility")
      run_admissibility(ctx);
    else if (res.kind == "dilation")
      run_dilation(ctx);
    else
      throw ValidationError("unknown experiment kind '" + res.kind +
                            "' (evolve, spectrum, mourre, minimal, maximal, middle, "
                            "remainder, relbound, admissibility, dilation)");
  } catch (const ParseError& e) {
    res.parse_error = e.what();
  } catch (const ValidationError& e) {
    res.validation_error = e.what();
  } catch (const std::invalid_argument& e) {
    res.validation_error = e.what();
  } catch (const std::exception& e) {
    res.runtime_error_msg = e.what();
  }
}

std::vector<std::pair<const ConfigSection*, std::string>> experiment_sections(
    const ConfigFile& cfg) {
  std::vector<std::pair<const ConfigSection*, std::string>> out;
  std::set<std::string> names;
  for (const auto& sec : cfg.sections) {
    std::string name;
    if (sec.name == "experiment")
      name = sec.get_string("name", sec.get_string("kind", "experiment"));
    else if (sec.name.rfind("experiment:", 0) == 0)
      name = sec.name.substr(std::string("experiment:").size());
    else
      continue;
    if (name.empty())
      throw ValidationError("experiment section at line " + std::to_string(sec.line) +
                            " has an empty name");
    if (!names.insert(name).second)
      throw ValidationError("duplicate experiment name '" + name + "'");
    out.emplace_back(&sec, name);
  }
  if (out.empty())
    throw ValidationError("config declares no [experiment] or [experiment:name] section");
  return out;
}

}  // namespace

int max_worker_threads() {
  if (const char* env = std::getenv("VELOBOUND_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

RunOutcome run_config_file(const std::string& path, bool validate_only, std::ostream& out) {
  RunOutcome outcome;
  std::vector<ExperimentOutcome> results;
  try {
    const ConfigFile cfg = read_config_file(path);
    const SharedSetup shared = parse_shared(cfg);
    const auto sections = experiment_sections(cfg);
    outcome.experiments = static_cast<int>(sections.size());
    if (!validate_only) std::filesystem::create_directories(shared.out_dir);

    results.resize(sections.size());
    const int workers =
        std::min<int>(max_worker_threads(), static_cast<int>(sections.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= sections.size()) return;
        execute_section(shared, *sections[i].first, sections[i].second, validate_only,
                        results[i]);
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int i = 0; i < workers; ++i) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
  } catch (const ParseError& e) {
    out << "error: " << e.what() << "\n";
    outcome.exit_code = 2;
    return outcome;
  } catch (const ValidationError& e) {
    out << "error: " << e.what() << "\n";
    outcome.exit_code = 3;
    return outcome;
  } catch (const std::invalid_argument& e) {
    out << "error: " << e.what() << "\n";
    outcome.exit_code = 3;
    return outcome;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    outcome.exit_code = 4;
    return outcome;
  }

  bool any_parse = false, any_validation = false, any_flag = false, any_assert = false;
  for (const auto& r : results) {
    out << "== " << r.name << " (kind=" << (r.kind.empty() ? "?" : r.kind) << ") ==\n";
    if (validate_only && r.parse_error.empty() && r.validation_error.empty() &&
        r.runtime_error_msg.empty())
      out << "ok\n";
    for (const auto& l : r.lines) out << l << "\n";
    if (!r.parse_error.empty()) {
      out << "error: " << r.parse_error << "\n";
      any_parse = true;
    }
    if (!r.validation_error.empty()) {
      out << "error: " << r.validation_error << "\n";
      any_validation = true;
    }
    if (!r.runtime_error_msg.empty()) {
      out << "error: " << r.runtime_error_msg << "\n";
      any_flag = true;
    }
    any_flag = any_flag || r.flag_violation;
    any_assert = any_assert || r.assertion_failure;
    outcome.assertions_passed += r.passes;
    outcome.assertions_failed += r.fails;
  }

  if (any_parse)
    outcome.exit_code = 2;
  else if (any_validation)
    outcome.exit_code = 3;
  else if (any_flag)
    outcome.exit_code = 4;
  else if (any_assert)
    outcome.exit_code = 1;

  out << "summary: experiments=" << outcome.experiments
      << " asserts_passed=" << outcome.assertions_passed
      << " asserts_failed=" << outcome.assertions_failed << " exit=" << outcome.exit_code
      << "\n";
  return outcome;
}

}  // namespace velobound
