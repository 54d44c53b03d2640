// solver.hpp - Picard fixed-point construction of cylinder trajectories:
// scattering solves with prescribed linear part (plain and first-iterate
// refined), Dirichlet solves with prescribed boundary trace, and the
// interior (near-zero) variants of both. Also the transported
// nonlinearity eval_g and the per-node decay table the rate experiments
// regress on.
//
// The iteration state is the deviation v from the linear flow v_L. One
// step evaluates the transported nonlinearity g on the grid of a node,
// integrates it with the decaying Duhamel operator, and measures the
// weighted increment; geometric decrease of increments is the practical
// contraction certificate. Non-contraction in the scattering family
// triggers a restart further out (larger t0), which shrinks the effective
// data.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "conformal.hpp"
#include "duhamel.hpp"
#include "equations.hpp"
#include "norms.hpp"
#include "sphere.hpp"
#include "traj.hpp"
#include "util.hpp"

namespace exsc {

/// State left the configured chart neighborhood during a nonlinearity
/// evaluation.
struct ChartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The Picard iteration failed to contract (or to converge in the
/// allotted iterations), after any permitted restarts.
struct ContractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolveMode { scatter, scatter_refined, dirichlet, zero_scatter, zero_dirichlet };

inline SolveMode solve_mode_from_string(const std::string& s) {
  if (s == "scatter") return SolveMode::scatter;
  if (s == "scatter_refined") return SolveMode::scatter_refined;
  if (s == "dirichlet") return SolveMode::dirichlet;
  if (s == "zero_scatter") return SolveMode::zero_scatter;
  if (s == "zero_dirichlet") return SolveMode::zero_dirichlet;
  throw std::invalid_argument("unknown solve mode: " + s);
}

inline bool mode_is_interior(SolveMode m) {
  return m == SolveMode::zero_scatter || m == SolveMode::zero_dirichlet;
}
inline bool mode_is_dirichlet(SolveMode m) {
  return m == SolveMode::dirichlet || m == SolveMode::zero_dirichlet;
}

struct SolveConfig {
  double s = 0;  // 0 selects the default d/2 + 1.6
  int lmax = 8;
  int oversample = 4;   // grid density; raise for high-degree nonlinearities
  double r0 = 1.0;      // data radius (>= 1 outside, <= 1 inside)
  double span = 16.0;   // cylinder time length T_max - t0
  double dt = 0.04;
  double eps_fp = 1e-10;  // weighted norm of increments
  int max_iter = 60;
  SolveMode mode = SolveMode::scatter;
  double t1_offset = 0;  // anchor shift for the weighted-sup diagnostics
  double tail_tol = 1e-10;
  int threads = 1;
  int max_restarts = 4;  // t0 escalations on non-contraction
  double fit_rlo = 0, fit_rhi = 0;  // decay-fit window; 0 = automatic
  double nu_probe = std::numeric_limits<double>::quiet_NaN();
};

struct SolveReport {
  std::vector<double> increments;  // weighted norm of v_{k+1} - v_k
  std::vector<double> ratios;
  bool converged = false;
  int iterations = 0;
  int restarts = 0;
  double final_increment = std::numeric_limits<double>::quiet_NaN();
  double ode_defect = std::numeric_limits<double>::quiet_NaN();
  double nu_predicted = std::numeric_limits<double>::quiet_NaN();
  double h1_value = std::numeric_limits<double>::quiet_NaN();
  LineFit decay_fit;                 // log z-norm of the deviation vs log r
  std::vector<double> table_r;       // decay table over the grid
  std::vector<double> table_z;
  double trace_error = std::numeric_limits<double>::quiet_NaN();
  LineFit psi0_fit;     // refined mode: weighted decay of the first iterate
  XNorm psi0_xnorm;     // refined mode: weighted sup at the probe rate
  LineFit refined_fit;  // refined mode: decay of v - Psi(0)
  std::string notes;
};

struct Solution {
  std::shared_ptr<SphereBasis> basis;
  ConformalFrame frame;
  TimeGrid grid;
  int ncomp = 1;
  Trajectory total;      // cylinder trajectory of the solution u
  Trajectory linear;     // flow of the data (v_L)
  Trajectory deviation;  // total - linear
  Trajectory forcing;    // transported nonlinearity at the fixed point
  std::optional<Trajectory> psi0;      // first iterate, refined mode
  std::optional<SpectralField> v_plus; // scattering datum, Dirichlet modes
  SolveReport report;
};

namespace detail {

inline void traj_sub(const Trajectory& a, const Trajectory& b, Trajectory& out) {
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
}
inline void traj_add(const Trajectory& a, const Trajectory& b, Trajectory& out) {
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = a.data[i] + b.data[i];
}

/// Least squares line through the finite samples only; nullopt when fewer
/// than two remain or the abscissae do not spread.
inline std::optional<LineFit> fit_finite(const std::vector<double>& x,
                                         const std::vector<double>& y) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isfinite(x[i]) && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  if (xs.size() < 2) return std::nullopt;
  double lo = *std::min_element(xs.begin(), xs.end());
  double hi = *std::max_element(xs.begin(), xs.end());
  if (hi - lo < 1e-12) return std::nullopt;
  return fit_line(xs, ys);
}

}  // namespace detail

/// Transported nonlinearity: per node, reconstruct u and its physical
/// gradient on the collocation grid, apply f, scale by the conformal
/// factor (growing e^{(d+2)t/2} outside, decaying inside), analyze back.
/// Output lives in the value slices; derivative slices are zero.
inline Trajectory eval_g(const Trajectory& T, const NonlinearitySpec& spec,
                         const ConformalFrame& frame, int threads = 1) {
  const SphereBasis& b = *T.basis;
  if (spec.d != b.d) throw std::invalid_argument("eval_g: dimension mismatch");
  if (spec.ncomp != T.ncomp) throw std::invalid_argument("eval_g: component mismatch");
  if (frame.d != b.d) throw std::invalid_argument("eval_g: frame mismatch");
  Trajectory out(b, T.grid, T.ncomp);
  const int N = T.grid.n, ncomp = T.ncomp, d = b.d, ngrid = b.ngrid;
  const double orient_sign = frame.orient == Orientation::infinity_ ? 1.0 : -1.0;
  std::vector<std::string> errs(static_cast<std::size_t>(N));
  parallel_for(std::size_t(N), threads, [&](std::size_t n) {
    try {
      const double t = T.grid.t(int(n));
      GridField u = node_sphere_values(T, int(n), frame);
      GridField gr = reconstruct_gradient(T, int(n), frame);
      const double esc = std::exp(orient_sign * (d + 2) * t / 2);
      GridField gval(b, ncomp);
      std::vector<double> ubuf(static_cast<std::size_t>(ncomp));
      std::vector<double> gbuf(std::size_t(ncomp) * d);
      std::vector<double> fbuf(static_cast<std::size_t>(ncomp));
      const double guard = spec.chart_radius;
      for (int j = 0; j < ngrid; ++j) {
        double rho = 0;
        for (int c = 0; c < ncomp; ++c) {
          ubuf[std::size_t(c)] = u.v[std::size_t(c) * ngrid + j];
          rho += ubuf[std::size_t(c)] * ubuf[std::size_t(c)];
        }
        if (rho > guard * guard)
          throw std::domain_error("eval_g: state radius " + std::to_string(std::sqrt(rho)) +
                                  " outside chart radius " + std::to_string(guard) +
                                  " at t = " + std::to_string(t));
        for (int c = 0; c < ncomp; ++c)
          for (int i = 0; i < d; ++i)
            gbuf[std::size_t(c) * d + i] = gr.v[(std::size_t(c) * d + i) * ngrid + j];
        spec.eval(ubuf.data(), gbuf.data(), fbuf.data());
        for (int c = 0; c < ncomp; ++c) gval.v[std::size_t(c) * ngrid + j] = esc * fbuf[std::size_t(c)];
      }
      SpectralField gc = b.analyze(gval);
      // Quadrature roundoff rides on every coefficient at the scale of the
      // slice's largest value and decays at the slowest rate present, so on
      // fast high-l shells it would masquerade as a growing weighted tail.
      // Coefficients below that roundoff are noise, not signal: zero them.
      for (int c = 0; c < ncomp; ++c) {
        double mx = 0;
        const double* gv = gval.v.data() + std::size_t(c) * ngrid;
        for (int j = 0; j < ngrid; ++j) mx = std::max(mx, std::abs(gv[j]));
        const double floor = 1e-13 * mx;
        const double* src = gc.c.data() + std::size_t(c) * b.nbasis;
        double* dst = out.v(int(n), c);
        for (int k = 0; k < b.nbasis; ++k)
          dst[k] = std::abs(src[k]) < floor ? 0.0 : src[k];
      }
    } catch (const std::domain_error& e) {
      errs[n] = std::string("C") + e.what();
    } catch (const std::exception& e) {
      errs[n] = std::string("X") + e.what();
    }
  });
  for (const auto& e : errs) {
    if (e.empty()) continue;
    if (e[0] == 'C') throw ChartError(e.substr(1));
    throw std::runtime_error(e.substr(1));
  }
  return out;
}

namespace detail {

/// Effective decay rate used for gating and reporting: the structured
/// exponent when a structure flag applies, the plane null gain when the
/// null flag applies, otherwise the generic exponent. NaN without
/// metadata.
inline double effective_rate(const NonlinearitySpec& spec) {
  if (spec.monomials.empty()) return std::numeric_limits<double>::quiet_NaN();
  double nu = nu_exponent(spec);
  if (spec.scalar_product_structure || spec.bracket_structure_2d)
    nu = std::max(nu, nu_exponent_structured(spec));
  if (spec.d == 2 && spec.null_condition_2d) nu = std::max(nu, 2.0);
  return nu;
}

/// Pointwise weighted pair magnitude of a trajectory node (log domain).
inline std::vector<double> pair_logs(const Trajectory& T, double s) {
  std::vector<double> out(std::size_t(T.grid.n));
  for (int n = 0; n < T.grid.n; ++n)
    out[std::size_t(n)] = node_pair_log(T, n, s, T.grid.t0);
  return out;
}

struct PicardState {
  Trajectory v;        // accepted deviation (dirichlet: full state)
  Trajectory forcing;  // eval_g at the previous state that produced v
  std::optional<SpectralField> uplus;
  SolveReport rep;
};

}  // namespace detail

namespace detail {

/// Physical sphere trace of a trajectory node, coefficient-wise.
inline SpectralField node_trace(const Trajectory& T, int node, const ConformalFrame& frame) {
  const SphereBasis& b = *T.basis;
  SpectralField out(b, T.ncomp);
  double w = frame.vweight(T.grid.t(node));
  for (int c = 0; c < T.ncomp; ++c)
    for (int k = 0; k < b.nbasis; ++k)
      out.c[std::size_t(c) * b.nbasis + k] = T.v(node, c)[k] / w;
  return out;
}

}  // namespace detail

/// Per-node (radius, matched-radius norm of the physical trace) table,
/// the quantity the decay-fit experiments regress on.
inline std::pair<std::vector<double>, std::vector<double>> decay_table(
    const Trajectory& T, const ConformalFrame& frame, double s) {
  std::pair<std::vector<double>, std::vector<double>> out;
  for (int n = 0; n < T.grid.n; ++n) {
    double r = frame.radius(T.grid.t(n));
    SpectralField tr = detail::node_trace(T, n, frame);
    out.first.push_back(r);
    out.second.push_back(std::exp(z_norm_log(tr, s, r, frame.orient)));
  }
  return out;
}

/// Entry point shared by the named wrappers. Builds the basis, frame and
/// grid from the config, runs the mode's Picard iteration, and assembles
/// the solution with its report. The scattering family restarts further
/// out on non-contraction, up to max_restarts times.
inline Solution solve(const SpectralField& u0, const NonlinearitySpec& spec, SolveConfig cfg) {
  const int d = spec.d;
  if (u0.basis->d != d) throw std::invalid_argument("solve: data dimension mismatch");
  if (u0.ncomp != spec.ncomp) throw std::invalid_argument("solve: data component mismatch");
  if (cfg.s == 0) cfg.s = d / 2.0 + 1.6;
  if (cfg.s <= d / 2.0 + 1.5)
    throw std::invalid_argument("solve: smoothness s must exceed d/2 + 3/2");
  const bool interior = mode_is_interior(cfg.mode);
  const bool dirichlet = mode_is_dirichlet(cfg.mode);
  const bool refined = cfg.mode == SolveMode::scatter_refined;
  if (interior) {
    if (cfg.r0 <= 0 || cfg.r0 > 1)
      throw std::invalid_argument("solve: interior modes need 0 < r0 <= 1");
  } else if (cfg.r0 < 1) {
    throw std::invalid_argument("solve: exterior modes need r0 >= 1");
  }

  // admissibility gates from the metadata, when present
  double nu_pred = detail::effective_rate(spec);
  if (!spec.monomials.empty()) {
    if (interior) {
      bool derivative_free = true, structured_low = spec.scalar_product_structure ||
                                                    spec.bracket_structure_2d;
      for (const Monomial& m : spec.monomials) {
        if (m.qtotal() != 0) derivative_free = false;
        if (m.qtotal() > 2) structured_low = false;
        if (m.qtotal() == 0 && m.ptotal() < 2 && m.a != 0)
          throw std::invalid_argument("solve: interior modes need |p| >= 2 per monomial");
      }
      if (!derivative_free && !structured_low)
        throw std::invalid_argument(
            "solve: interior modes need a derivative-free or low-order structured nonlinearity");
    } else if (refined) {
      if (!(nu_pred >= 0))
        throw std::invalid_argument("solve: refined mode needs a nonnegative predicted rate");
    } else {
      if (!(nu_pred > 0))
        throw std::invalid_argument("solve: scattering needs a positive predicted rate");
    }
  }
  if (!spec.metadata_exact && interior) {
    // non-polynomial evaluator: insist on zero-mean data
    double mean = 0;
    for (int c = 0; c < u0.ncomp; ++c) mean += std::abs(u0.c[std::size_t(c) * u0.basis->nbasis]);
    if (mean > 1e-14) throw std::invalid_argument("solve: interior non-polynomial case needs zero-mean data");
  }
  const double nu_report = interior ? 2.0 : nu_pred;

  double r0 = cfg.r0;
  int restarts = 0;
  for (;;) {
    auto basis = std::make_shared<SphereBasis>(SphereBasis::make(d, cfg.lmax, cfg.oversample));
    ConformalFrame frame = interior ? ConformalFrame::zero(d, r0) : ConformalFrame::infinity(d, r0);
    TimeGrid grid = TimeGrid::make(frame.t0, frame.t0 + cfg.span, cfg.dt);
    PhiOptions popt;
    popt.tail_tol = cfg.tail_tol;
    popt.threads = cfg.threads;

    // cylinder trace of the data at the original radius; under a restart
    // the trace moves to the larger t0 along the linear flow itself
    SpectralField v0 = embed(u0, *basis);
    double w0 = std::pow(cfg.r0, 0.5 * (d - 2));
    for (double& c : v0.c) c *= w0;
    if (restarts > 0 && !dirichlet) {
      double shift = frame.t0 - (interior ? -std::log(cfg.r0) : std::log(cfg.r0));
      for (int c = 0; c < v0.ncomp; ++c)
        for (int k = 0; k < basis->nbasis; ++k)
          v0.c[std::size_t(c) * basis->nbasis + k] *=
              std::exp(-basis->lambda(basis->deg[k]) * shift);
    }
    Trajectory vL = linear_trajectory(v0, grid);

    try {
      detail::PicardState st{Trajectory(*basis, grid, spec.ncomp),
                             Trajectory(*basis, grid, spec.ncomp), std::nullopt, SolveReport{}};
      st.rep.nu_predicted = nu_report;
      if (!spec.monomials.empty()) {
        try {
          st.rep.h1_value = h1_partial(spec, cfg.s, hs_norm(v0, cfg.s));
        } catch (const std::exception&) {
        }
      }

      Trajectory v(*basis, grid, spec.ncomp);      // current deviation / state
      Trajectory vtmp(*basis, grid, spec.ncomp);   // scratch
      std::optional<Trajectory> psi0;
      if (dirichlet) v = vL;

      // refined start: the first iterate and its decay diagnostics
      if (refined) {
        Trajectory F0 = eval_g(vL, spec, frame, cfg.threads);
        psi0 = phi(F0, popt);
        std::vector<double> logs = detail::pair_logs(*psi0, cfg.s);
        std::vector<double> ts(logs.size());
        for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = grid.t(int(i)) - grid.t0;
        std::vector<double> tw, lw;
        for (std::size_t i = 0; i < ts.size(); ++i)
          if (ts[i] >= 1.0 && ts[i] <= std::min(6.0, cfg.span * 0.75)) {
            tw.push_back(ts[i]);
            lw.push_back(logs[i]);
          }
        auto f = detail::fit_finite(tw, lw);
        bool psi0_zero = true;
        for (double x : logs)
          if (std::isfinite(x)) psi0_zero = false;
        if (!psi0_zero) {
          if (!f) throw std::runtime_error("solve: cannot measure first-iterate decay");
          st.rep.psi0_fit = *f;
          double nuhat = -f->slope;
          if (nuhat <= 0.05)
            throw std::runtime_error(
                "solve: first iterate decays too slowly (measured rate " +
                std::to_string(nuhat) + "); borderline case without usable gain");
          double probe = std::isfinite(cfg.nu_probe)
                             ? cfg.nu_probe
                             : (nu_pred > 0 ? std::min(nu_pred, 0.95 * nuhat) : 0.9 * nuhat);
          st.rep.psi0_xnorm =
              x_nu_norm(*psi0, cfg.s, probe, grid.t0, grid.t0 + cfg.t1_offset);
          if (st.rep.psi0_xnorm.unbounded)
            throw std::runtime_error("solve: first iterate fails the " + std::to_string(probe) +
                                     "-rate weighted bound");
          v = *psi0;
        }
      }

      // Picard loop
      double prev_inc = std::numeric_limits<double>::quiet_NaN();
      int bad_streak = 0;
      Trajectory diff(*basis, grid, spec.ncomp);
      for (int it = 0; it < cfg.max_iter; ++it) {
        if (dirichlet) {
          st.forcing = eval_g(v, spec, frame, cfg.threads);
          auto [corr, uplus] = phi_dirichlet(st.forcing, popt);
          detail::traj_add(vL, corr, vtmp);
          st.uplus = std::move(uplus);
        } else {
          detail::traj_add(v, vL, vtmp);
          st.forcing = eval_g(vtmp, spec, frame, cfg.threads);
          vtmp = phi(st.forcing, popt);
        }
        detail::traj_sub(vtmp, v, diff);
        double inc = 0;
        try {
          inc = traj_norm(diff, cfg.s, grid.t0, grid.t0);
        } catch (const std::invalid_argument&) {
          inc = 0;
        }
        if (!std::isfinite(inc))
          throw ContractionError("solve: non-finite increment at iteration " +
                                 std::to_string(it));
        st.rep.increments.push_back(inc);
        st.rep.iterations = it + 1;
        std::swap(v, vtmp);
        if (std::isfinite(prev_inc) && prev_inc > 0) {
          double ratio = inc / prev_inc;
          st.rep.ratios.push_back(ratio);
          if (ratio >= 1.0) {
            if (++bad_streak >= 3)
              throw ContractionError(
                  "solve: no contraction (three consecutive non-decreasing increments); "
                  "the data may be too large at this radius");
          } else {
            bad_streak = 0;
          }
        }
        prev_inc = inc;
        if (inc < cfg.eps_fp) {
          st.rep.converged = true;
          st.rep.final_increment = inc;
          break;
        }
      }
      if (!st.rep.converged)
        throw ContractionError("solve: no convergence within " + std::to_string(cfg.max_iter) +
                               " iterations (last increment " +
                               std::to_string(prev_inc) + ")");
      st.rep.restarts = restarts;
      st.v = std::move(v);

      // assemble: totals, residual, decay table, mode extras
      Trajectory total(*basis, grid, spec.ncomp), deviation(*basis, grid, spec.ncomp);
      if (dirichlet) {
        total = st.v;
        detail::traj_sub(total, vL, deviation);
      } else {
        detail::traj_add(st.v, vL, total);
        deviation = st.v;
      }
      st.rep.ode_defect = ode_residual(total, st.forcing, cfg.s);

      // decay of the scattering deviation: for Dirichlet modes this is the
      // correction below the extracted linear flow, otherwise v itself
      Trajectory decay_part = deviation;
      if (dirichlet && st.uplus) {
        Trajectory lplus = linear_trajectory(*st.uplus, grid);
        Trajectory vplus_flow(*basis, grid, spec.ncomp);
        detail::traj_add(vL, lplus, vplus_flow);
        detail::traj_sub(total, vplus_flow, decay_part);
      }
      std::tie(st.rep.table_r, st.rep.table_z) = decay_table(decay_part, frame, cfg.s);
      double rlo = cfg.fit_rlo, rhi = cfg.fit_rhi;
      if (rlo == 0 || rhi == 0) {
        if (interior) {
          rlo = r0 * std::exp(-std::min(4.0, cfg.span * 0.5));
          rhi = r0 / 2;
        } else {
          rlo = 2 * r0;
          rhi = r0 * std::exp(std::min(4.6, cfg.span * 0.5));
        }
      }
      {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < st.rep.table_r.size(); ++i) {
          double r = st.rep.table_r[i], z = st.rep.table_z[i];
          if (r >= std::min(rlo, rhi) && r <= std::max(rlo, rhi) && z > 0)
            lx.push_back(std::log(r)), ly.push_back(std::log(z));
        }
        if (auto f = detail::fit_finite(lx, ly)) st.rep.decay_fit = *f;
      }
      if (refined && psi0) {
        Trajectory sub(*basis, grid, spec.ncomp);
        detail::traj_sub(deviation, *psi0, sub);
        std::vector<double> logs = detail::pair_logs(sub, cfg.s);
        std::vector<double> tw, lw;
        for (int n = 0; n < grid.n; ++n) {
          double toff = grid.t(n) - grid.t0;
          if (toff >= 1.0 && toff <= std::min(6.0, cfg.span * 0.75)) {
            tw.push_back(toff);
            lw.push_back(logs[std::size_t(n)]);
          }
        }
        if (auto f = detail::fit_finite(tw, lw)) st.rep.refined_fit = *f;
      }

      std::optional<SpectralField> vplus;
      if (dirichlet && st.uplus) {
        SpectralField vp = v0;
        for (std::size_t i = 0; i < vp.c.size(); ++i) vp.c[i] += st.uplus->c[i];
        vplus = std::move(vp);
        double num = 0, den = 0;
        for (int c = 0; c < spec.ncomp; ++c)
          for (int k = 0; k < basis->nbasis; ++k) {
            double dtr = total.v(0, c)[k] - v0.c[std::size_t(c) * basis->nbasis + k];
            num += dtr * dtr;
            den += v0.c[std::size_t(c) * basis->nbasis + k] * v0.c[std::size_t(c) * basis->nbasis + k];
          }
        st.rep.trace_error = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
      }

      Solution sol{basis,
                   frame,
                   grid,
                   spec.ncomp,
                   std::move(total),
                   std::move(vL),
                   std::move(deviation),
                   std::move(st.forcing),
                   std::move(psi0),
                   std::move(vplus),
                   std::move(st.rep)};
      return sol;
    } catch (const ContractionError&) {
      if (dirichlet || restarts >= cfg.max_restarts) throw;
      ++restarts;
      double t0_old = interior ? -std::log(r0) : std::log(r0);
      double t0_new = std::max(2 * t0_old, t0_old + std::log(4.0));
      r0 = interior ? std::exp(-t0_new) : std::exp(t0_new);
    }
  }
}

inline Solution solve_scatter(const SpectralField& u0, const NonlinearitySpec& spec,
                              SolveConfig cfg = {}) {
  cfg.mode = SolveMode::scatter;
  return solve(u0, spec, cfg);
}
inline Solution solve_scatter_refined(const SpectralField& u0, const NonlinearitySpec& spec,
                                      SolveConfig cfg = {}) {
  cfg.mode = SolveMode::scatter_refined;
  return solve(u0, spec, cfg);
}
inline Solution solve_dirichlet(const SpectralField& u0, const NonlinearitySpec& spec,
                                SolveConfig cfg = {}) {
  cfg.mode = SolveMode::dirichlet;
  return solve(u0, spec, cfg);
}
inline Solution solve_zero(const SpectralField& u0, const NonlinearitySpec& spec,
                           SolveConfig cfg = {}) {
  cfg.mode = SolveMode::zero_scatter;
  return solve(u0, spec, cfg);
}
inline Solution solve_zero_dirichlet(const SpectralField& u0, const NonlinearitySpec& spec,
                                     SolveConfig cfg = {}) {
  cfg.mode = SolveMode::zero_dirichlet;
  return solve(u0, spec, cfg);
}

}  // namespace exsc
