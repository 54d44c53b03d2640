// exsc - command line front end: solves with prescribed asymptotics at
// infinity or at a point, decay-rate measurements, null-form checks, the
// structural verification suite, and the independent radial oracle.
//
// Exit codes: 0 success, 1 usage/config/runtime error, 2 no contraction,
// 3 far-tail failure, 4 chart exit.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "exsc/equations.hpp"
#include "exsc/io.hpp"
#include "exsc/nullform.hpp"
#include "exsc/radial.hpp"
#include "exsc/solver.hpp"
#include "exsc/verify.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitNoContraction = 2;
constexpr int kExitTail = 3;
constexpr int kExitChart = 4;

exsc::EquationPreset preset_from_config(const exsc::Config& cfg, int d) {
  std::string name = cfg.get_string("equation.name", "semilinear");
  std::unordered_map<std::string, double> opts;
  for (const char* k : {"p", "kappa", "target_dim", "H1", "H2"}) {
    std::string key = std::string("equation.") + k;
    if (cfg.has(key)) opts[k] = cfg.get_double(key, 0.0);
  }
  return exsc::equation_preset(name, d, opts);
}

exsc::SolveConfig solve_config_from(const exsc::Config& cfg, int threads) {
  exsc::SolveConfig sc;
  sc.s = cfg.get_double("solve.s", 0.0);
  sc.lmax = cfg.get_int("solve.lmax", 8);
  sc.oversample = cfg.get_int("solve.oversample", 4);
  sc.r0 = cfg.get_double("solve.r0", 1.0);
  sc.span = cfg.get_double("solve.span", 16.0);
  sc.dt = cfg.get_double("solve.dt", 0.04);
  sc.eps_fp = cfg.get_double("solve.eps", 1e-10);
  sc.max_iter = cfg.get_int("solve.max_iter", 60);
  sc.t1_offset = cfg.get_double("solve.t1_offset", 0.0);
  sc.tail_tol = cfg.get_double("solve.tail_tol", 1e-10);
  sc.max_restarts = cfg.get_int("solve.max_restarts", 4);
  sc.fit_rlo = cfg.get_double("solve.fit_rlo", 0.0);
  sc.fit_rhi = cfg.get_double("solve.fit_rhi", 0.0);
  sc.threads = threads;
  return sc;
}

/// Data field: explicit `data.mode.<comp>.<l>.<m> = value` entries when
/// present, otherwise random coefficients in the band `data.lmax` scaled
/// by `data.amplitude`.
exsc::SpectralField data_from_config(const exsc::Config& cfg, const exsc::SphereBasis& basis,
                                     int ncomp, std::uint64_t seed) {
  exsc::SpectralField u0(basis, ncomp);
  bool explicit_modes = false;
  for (const auto& [key, val] : cfg.kv) {
    if (key.rfind("data.mode.", 0) != 0) continue;
    explicit_modes = true;
    std::string rest = key.substr(10);
    int c = 0, l = 0, m = 0;
    if (std::sscanf(rest.c_str(), "%d.%d.%d", &c, &l, &m) != 3)
      throw std::runtime_error("config: cannot parse mode key `" + key + "`");
    if (c < 0 || c >= ncomp || l < 0 || l > basis.lmax || m < 0 || m >= basis.nm(l))
      throw std::runtime_error("config: mode key `" + key + "` outside the basis");
    u0.c[std::size_t(c) * basis.nbasis + basis.offset(l) + m] = std::stod(val);
  }
  if (explicit_modes) return u0;

  double amp = cfg.get_double("data.amplitude", 1e-2);
  int dl = std::min(cfg.get_int("data.lmax", 3), basis.lmax);
  bool zero_mean = cfg.get_bool("data.zero_mean", false);
  exsc::Rng rng(seed);
  for (int c = 0; c < ncomp; ++c)
    for (int l = zero_mean ? 1 : 0; l <= dl; ++l)
      for (int m = 0; m < basis.nm(l); ++m)
        u0.c[std::size_t(c) * basis.nbasis + basis.offset(l) + m] = rng.sym(amp);
  return u0;
}

exsc::BilinearFormField form_from_config(const exsc::Config& cfg) {
  std::string kind = cfg.get_string("null.form", "dot");
  if (kind == "dot") return exsc::form_dot();
  if (kind == "symplectic") return exsc::form_symplectic();
  if (kind == "tt") return exsc::form_tt();
  if (kind == "custom") {
    exsc::Mat2 m;
    const char* names[4] = {"a00", "a01", "a10", "a11"};
    for (int e = 0; e < 4; ++e)
      m[std::size_t(e)] = exsc::Complex(cfg.get_double(std::string("null.") + names[e] + ".re", 0.0),
                                        cfg.get_double(std::string("null.") + names[e] + ".im", 0.0));
    return exsc::BilinearFormField::constant(m);
  }
  throw std::runtime_error("config: unknown null.form `" + kind + "`");
}

void echo_config(exsc::Report& rep, const exsc::Config& cfg) {
  for (const auto& [k, v] : cfg.kv) rep.add("config." + k, v);
}

void write_solution(const std::string& out_dir, const exsc::Solution& sol,
                    const exsc::Config& cfg, double s_eff) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const exsc::SolveReport& r = sol.report;

  exsc::Report rep;
  rep.add("converged", r.converged);
  rep.add("iterations", r.iterations);
  rep.add("restarts", r.restarts);
  rep.add("final_increment", r.final_increment);
  rep.add("ode_defect", r.ode_defect);
  rep.add("nu_predicted", r.nu_predicted);
  rep.add("h1_value", r.h1_value);
  rep.add("decay_slope", r.decay_fit.slope);
  rep.add("decay_slope_rms", r.decay_fit.rms_residual);
  rep.add("decay_fit_points", r.decay_fit.npoints);
  if (std::isfinite(r.trace_error)) rep.add("trace_error", r.trace_error);
  if (r.psi0_fit.npoints > 0) {
    rep.add("first_iterate_slope", r.psi0_fit.slope);
    rep.add("first_iterate_weighted_sup", r.psi0_xnorm.value);
  }
  if (r.refined_fit.npoints > 0) rep.add("subtracted_slope", r.refined_fit.slope);
  rep.add("grid.t0", sol.grid.t0);
  rep.add("grid.dt", sol.grid.dt);
  rep.add("grid.nodes", sol.grid.n);
  rep.add("effective_s", s_eff);
  echo_config(rep, cfg);
  rep.write(out_dir + "/report.txt");

  exsc::write_csv(out_dir + "/decay.csv", {"r", "z"}, {r.table_r, r.table_z});
  std::vector<double> iters, incs;
  for (std::size_t i = 0; i < r.increments.size(); ++i) {
    iters.push_back(double(i));
    incs.push_back(r.increments[i]);
  }
  exsc::write_csv(out_dir + "/increments.csv", {"iteration", "increment"}, {iters, incs});
  exsc::save_trajectory(out_dir + "/total.exsc", sol.total, sol.frame, s_eff);
  exsc::save_trajectory(out_dir + "/deviation.exsc", sol.deviation, sol.frame, s_eff);
  if (sol.v_plus) {
    std::vector<double> idx, val;
    for (std::size_t k = 0; k < sol.v_plus->c.size(); ++k) {
      idx.push_back(double(k));
      val.push_back(sol.v_plus->c[k]);
    }
    exsc::write_csv(out_dir + "/scattering_datum.csv", {"index", "coefficient"}, {idx, val});
  }
}

int run_solve(exsc::SolveMode mode, const exsc::Config& cfg, const std::string& out_dir,
              int threads, std::uint64_t seed) {
  int d = cfg.get_int("solve.d", 3);
  exsc::EquationPreset eq = preset_from_config(cfg, d);
  exsc::SolveConfig sc = solve_config_from(cfg, threads);
  sc.mode = mode;
  auto basis = std::make_shared<exsc::SphereBasis>(
      exsc::SphereBasis::make(d, sc.lmax, sc.oversample));
  exsc::SpectralField u0 = data_from_config(cfg, *basis, eq.spec.ncomp, seed);
  exsc::Solution sol = exsc::solve(u0, eq.spec, sc);
  const exsc::SolveReport& r = sol.report;
  std::cout << "equation " << eq.name << ", d = " << d << "\n"
            << "converged " << (r.converged ? "yes" : "no") << " in " << r.iterations
            << " iterations (restarts " << r.restarts << ")\n"
            << "final increment " << r.final_increment << ", ode defect " << r.ode_defect << "\n"
            << "decay slope " << r.decay_fit.slope << " (predicted "
            << (mode == exsc::SolveMode::zero_scatter || mode == exsc::SolveMode::zero_dirichlet
                    ? r.nu_predicted
                    : -r.nu_predicted)
            << ", " << r.decay_fit.npoints << " points)\n";
  if (std::isfinite(r.trace_error)) std::cout << "trace error " << r.trace_error << "\n";
  if (r.psi0_fit.npoints > 0)
    std::cout << "first iterate slope " << r.psi0_fit.slope << "\n";
  if (r.refined_fit.npoints > 0)
    std::cout << "subtracted correction slope " << r.refined_fit.slope << "\n";
  double s_eff = sc.s == 0 ? d / 2.0 + 1.6 : sc.s;
  if (!out_dir.empty()) {
    write_solution(out_dir, sol, cfg, s_eff);
    std::cout << "wrote " << out_dir << "/report.txt\n";
  }
  return 0;
}

int run_rates(const exsc::Config& cfg, const std::string& in_path, const std::string& out_dir,
              double rlo, double rhi) {
  exsc::LoadedTrajectory lt = exsc::load_trajectory(in_path);
  double s = cfg.get_double("solve.s", 0.0);
  if (s == 0) s = lt.s != 0 ? lt.s : lt.basis->d / 2.0 + 1.6;
  auto [rs, zs] = exsc::decay_table(lt.traj, lt.frame, s);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rlo > 0 && rs[i] < std::min(rlo, rhi)) continue;
    if (rhi > 0 && rs[i] > std::max(rlo, rhi)) continue;
    if (zs[i] > 0) {
      lx.push_back(std::log(rs[i]));
      ly.push_back(std::log(zs[i]));
    }
  }
  if (lx.size() < 2) throw std::runtime_error("rates: fewer than two usable nodes in the window");
  exsc::LineFit fit = exsc::fit_line(lx, ly);
  std::cout << "nodes " << rs.size() << ", fitted " << fit.npoints << "\n"
            << "slope " << fit.slope << " (rms residual " << fit.rms_residual << ")\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    exsc::write_csv(out_dir + "/rates.csv", {"r", "z"}, {rs, zs});
    std::cout << "wrote " << out_dir << "/rates.csv\n";
  }
  return 0;
}

int run_check_null(const exsc::Config& cfg) {
  std::string kind = cfg.get_string("null.form", "dot");
  if (kind == "equation") {
    int d = cfg.get_int("solve.d", 2);
    exsc::EquationPreset eq = preset_from_config(cfg, d);
    if (!eq.spec.bracket_structure_2d)
      throw std::runtime_error("check-null: equation has no plane bracket structure");
    // every bracket monomial pairs two gradients through the symplectic
    // form scaled by a tensor entry; nullness is inherited entrywise
    bool all_null = true;
    for (const exsc::Monomial& m : eq.spec.monomials) {
      if (m.ptotal() != 0) continue;
      exsc::BilinearFormField f = exsc::form_symplectic();
      for (auto& mode : f.modes)
        for (auto& e : mode) e *= m.a;
      bool isnull = exsc::is_null(f);
      all_null = all_null && isnull;
    }
    std::cout << "equation bracket forms: " << (all_null ? "null" : "NOT null") << "\n";
    return all_null ? 0 : kExitError;
  }
  exsc::BilinearFormField f = form_from_config(cfg);
  exsc::BilinearFormField flat = exsc::flat_transform(f);
  bool isnull = exsc::is_null(f);
  double diag = 0;
  for (const exsc::Mat2& m : flat.modes)
    diag = std::max(diag, std::max(std::abs(m[0]), std::abs(m[3])));
  std::cout << "form " << kind << ": " << (isnull ? "null" : "NOT null")
            << " (largest resonant entry " << diag << ")\n";
  return isnull ? 0 : kExitError;
}

int run_probe_null(const exsc::Config& cfg, const std::string& out_dir, std::uint64_t seed) {
  exsc::BilinearFormField form = form_from_config(cfg);
  int lmax = cfg.get_int("probe.lmax", 4);
  double s = cfg.get_double("probe.s", 2.6);
  double t1 = cfg.get_double("probe.t1", 6.0);
  int nodes = cfg.get_int("probe.nodes", 25);
  exsc::SphereBasis basis = exsc::SphereBasis::make(2, lmax, 4);
  exsc::SpectralField u0(basis, 1), v0(basis, 1);
  bool have_u = false, have_v = false;
  for (const auto& [key, val] : cfg.kv) {
    bool is_u = key.rfind("data.u.", 0) == 0, is_v = key.rfind("data.v.", 0) == 0;
    if (!is_u && !is_v) continue;
    int l = 0, m = 0;
    if (std::sscanf(key.c_str() + 7, "%d.%d", &l, &m) != 2)
      throw std::runtime_error("config: cannot parse probe data key `" + key + "`");
    if (l < 0 || l > basis.lmax || m < 0 || m >= basis.nm(l))
      throw std::runtime_error("config: probe data key `" + key + "` outside the basis");
    (is_u ? u0 : v0).c[std::size_t(basis.offset(l)) + m] = std::stod(val);
    (is_u ? have_u : have_v) = true;
  }
  if (!have_u || !have_v) {
    exsc::Rng rng(seed ? seed : 1);
    for (int l = 1; l <= basis.lmax; ++l)
      for (int m = 0; m < basis.nm(l); ++m) {
        if (!have_u) u0.c[std::size_t(basis.offset(l)) + m] = rng.sym(1.0);
        if (!have_v) v0.c[std::size_t(basis.offset(l)) + m] = rng.sym(1.0);
      }
  }
  exsc::NullProbeResult res = exsc::null_decay_probe(u0, v0, form, s, 0.0, t1, nodes);
  std::cout << "weighted product slope " << res.fit.slope << " (rms residual "
            << res.fit.rms_residual << ", " << res.fit.npoints << " nodes)\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    exsc::write_csv(out_dir + "/probe.csv", {"t", "log_norm"}, {res.times, res.lognorms});
    std::cout << "wrote " << out_dir << "/probe.csv\n";
  }
  return 0;
}

int run_verify(const exsc::Config& cfg, int dsel) {
  int fails = 0;
  std::vector<int> dims = dsel == 0 ? std::vector<int>{2, 3} : std::vector<int>{dsel};
  for (int d : dims) {
    int lmax = cfg.get_int("verify.lmax", 8);
    double s = cfg.get_double("verify.s", d / 2.0 + 1.6);
    auto results = exsc::verify_structural(d, lmax, s, 1);
    for (const auto& r : results) {
      std::cout << (r.pass ? "PASS" : "FAIL") << " d=" << d << " " << r.name << " (" << r.value
                << " <= " << r.threshold << ")";
      if (!r.detail.empty()) std::cout << " " << r.detail;
      std::cout << "\n";
      fails += r.pass ? 0 : 1;
    }
  }
  return fails == 0 ? 0 : kExitError;
}

int run_oracle_radial(const exsc::Config& cfg, const std::string& out_dir) {
  int d = cfg.get_int("oracle.d", 3);
  int p = cfg.get_int("oracle.p", 5);
  double kappa = cfg.get_double("oracle.kappa", -1.0);
  double value = cfg.get_double("oracle.value", 0.1);
  double rmatch = cfg.get_double("oracle.r_match", 200.0);
  double tol = cfg.get_double("oracle.tol", 1e-12);
  exsc::RadialProfile prof = exsc::radial_ode_oracle(d, p, kappa, value, {}, rmatch, tol);
  std::cout << "asymptotic coefficient " << prof.c_asym << " (u ~ c r^{2-d})\n"
            << "samples " << prof.r.size() << " on [1, " << rmatch << "]\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    exsc::write_csv(out_dir + "/radial.csv", {"r", "u", "du"}, {prof.r, prof.u, prof.du});
    std::cout << "wrote " << out_dir << "/radial.csv\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral solver for prescribed asymptotics of semilinear problems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, in_path;
  int threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--config,-c", config_path, "config file (dotted keys)");
  app.add_option("--out,-o", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random data seed (overrides data.seed)");

  auto* inf = app.add_subcommand("solve-infinity", "scattering solve on an exterior domain");
  bool refined = false;
  inf->add_flag("--refined", refined, "first-iterate refinement and its diagnostics");
  auto* dir = app.add_subcommand("solve-dirichlet", "boundary-trace solve");
  bool interior = false;
  dir->add_flag("--interior", interior, "pose the data on an interior sphere");
  auto* zero = app.add_subcommand("solve-zero", "scattering solve near a point");
  auto* chk = app.add_subcommand("check-null", "resonant-frame test of a bilinear form");
  auto* prb = app.add_subcommand("probe-null", "measured decay of a form on linear flows");
  auto* rts = app.add_subcommand("rates", "decay table and slope of a stored trajectory");
  double rlo = 0, rhi = 0;
  rts->add_option("--in", in_path, "trajectory file")->required();
  rts->add_option("--rlo", rlo, "fit window lower radius");
  rts->add_option("--rhi", rhi, "fit window upper radius");
  auto* ver = app.add_subcommand("verify", "structural invariant suite");
  int dsel = 0;
  ver->add_option("--d", dsel, "restrict to one dimension")->check(CLI::Range(2, 3));
  auto* orc = app.add_subcommand("oracle-radial", "independent radial reference profile");

  CLI11_PARSE(app, argc, argv);

  try {
    exsc::Config cfg;
    if (!config_path.empty()) cfg = exsc::Config::parse_file(config_path);
    std::uint64_t eff_seed = seed ? seed : std::uint64_t(cfg.get_int("data.seed", 1));
    if (inf->parsed())
      return run_solve(refined ? exsc::SolveMode::scatter_refined : exsc::SolveMode::scatter,
                       cfg, out_dir, threads, eff_seed);
    if (dir->parsed())
      return run_solve(interior ? exsc::SolveMode::zero_dirichlet : exsc::SolveMode::dirichlet,
                       cfg, out_dir, threads, eff_seed);
    if (zero->parsed())
      return run_solve(exsc::SolveMode::zero_scatter, cfg, out_dir, threads, eff_seed);
    if (chk->parsed()) return run_check_null(cfg);
    if (prb->parsed()) return run_probe_null(cfg, out_dir, eff_seed);
    if (rts->parsed()) return run_rates(cfg, in_path, out_dir, rlo, rhi);
    if (ver->parsed()) return run_verify(cfg, dsel);
    if (orc->parsed()) return run_oracle_radial(cfg, out_dir);
  } catch (const exsc::ChartError& e) {
    std::cerr << "chart exit: " << e.what() << "\n";
    return kExitChart;
  } catch (const exsc::TailError& e) {
    std::cerr << "tail failure: " << e.what() << "\n";
    return kExitTail;
  } catch (const exsc::ContractionError& e) {
    std::cerr << "no contraction: " << e.what() << "\n";
    return kExitNoContraction;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
