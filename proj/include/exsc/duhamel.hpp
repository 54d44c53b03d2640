// duhamel.hpp - mode-wise Duhamel operators on the half-cylinder.
//
//   Phi(F):   v(t)   = -int_t^inf sinh((t-tau)L)/L F(tau) dtau
//             phi(t) = -int_t^inf cosh((t-tau)L)   F(tau) dtau
//   PhiD(F):  Phi(F) plus the linear flow of u_plus = -Phi(F)_v(t0),
//             so the v component vanishes at t0.
//
// Each (component, l, m) slot is independent with eigenvalue
// L = l + (d-2)/2 (kernel (t-tau) at the d=2, l=0 slot). The two suffix
// integrals E+-(t_n) = int_{t_n}^inf e^{+-L(tau-t_n)} F are accumulated
// backward from T_max; per interval the integrand is modeled by an
// exponential through the endpoint values when their signs allow (exact
// for single-exponential modes, which the closed-form tests exploit) and
// by the linear interpolant otherwise. The part beyond T_max is closed by
// a two-point exponential fit; a tail that is not negligible or not
// integrable against e^{+L tau} is a hard error naming the mode.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "norms.hpp"
#include "traj.hpp"
#include "util.hpp"

namespace exsc {

struct PhiOptions {
  double tail_tol = 1e-10;  // ceiling on the terminal weighted magnitude,
                            // relative to the trajectory's global one
  int threads = 1;
};

/// Raised when a mode's tail at T_max cannot be closed.
struct TailError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// int_0^h e^{a s} ds, stable for small |a h|.
inline double int_exp0(double a, double h) {
  if (a == 0) return h;
  return std::expm1(a * h) / a;
}

/// int_0^h s e^{a s} ds.
inline double int_exp1(double a, double h) {
  double z = a * h;
  if (std::abs(z) < 1e-2) {
    // series sum_k a^k h^{k+2} / (k! (k+2)); five terms reach ~1e-13
    double h2 = h * h;
    return h2 * (0.5 + z * (1.0 / 3 + z * (0.125 + z * (1.0 / 30 + z / 144))));
  }
  return (h * std::exp(z) - int_exp0(a, h)) / a;
}

/// int_0^h e^{a s} * model(s) ds, where model interpolates (f0, f1) at the
/// interval ends: exponential through the endpoints when same-signed,
/// linear otherwise.
inline double interval_integral(double a, double h, double f0, double f1) {
  if (f0 != 0 && f1 != 0 && (f0 > 0) == (f1 > 0)) {
    double kappa = std::log(f0 / f1) / h;
    return f0 * int_exp0(a - kappa, h);
  }
  return f0 * int_exp0(a, h) + (f1 - f0) / h * int_exp1(a, h);
}

/// As above with weight s instead of e^{a s} (the lambda = 0 kernel).
inline double interval_integral_s(double h, double f0, double f1) {
  if (f0 != 0 && f1 != 0 && (f0 > 0) == (f1 > 0)) {
    double kappa = std::log(f0 / f1) / h;
    return f0 * int_exp1(-kappa, h);
  }
  return f0 * 0.5 * h * h + (f1 - f0) / h * h * h / 3.0;
}

struct ModeTail {
  double kappa = 0;
  double fend = 0;
  bool use = false;
};

/// Decide how to close int_{T_max}^inf for one mode. logw_global is the
/// log of the largest weighted magnitude across the whole forcing.
inline ModeTail close_tail(const std::vector<double>& f, double lambda, double dt,
                           double span, double tail_tol, double logw_global,
                           const std::string& label) {
  ModeTail tail;
  const std::size_t n = f.size();
  double fend = f[n - 1], fprev = f[n - 2];
  double logw_end = fend == 0 ? -std::numeric_limits<double>::infinity()
                              : lambda * span + std::log(std::abs(fend));
  bool fit_ok = fend != 0 && fprev != 0 && (fend > 0) == (fprev > 0) &&
                std::abs(fend) < std::abs(fprev);
  double kappa = fit_ok ? std::log(fprev / fend) / dt : 0;
  if (logw_end <= std::log(tail_tol) + logw_global) {
    // negligible: use the fit when it is integrable, drop otherwise
    if (fit_ok && kappa > lambda) {
      tail.use = true;
      tail.kappa = kappa;
      tail.fend = fend;
    }
    return tail;
  }
  if (!fit_ok || kappa <= lambda)
    throw TailError("phi: non-integrable tail at " + label + " (fitted decay " +
                    std::to_string(kappa) + " <= eigenvalue " + std::to_string(lambda) +
                    "); raise T_max or check the forcing");
  throw TailError("phi: tail tolerance violated at " + label +
                  " (terminal weighted magnitude above tolerance); raise T_max");
}

}  // namespace detail

/// Duhamel solution vanishing at t = +infinity. Reads the v slices of F
/// (phi slices of the input are ignored); writes both slices.
inline Trajectory phi(const Trajectory& F, const PhiOptions& opt = {}) {
  const SphereBasis& b = *F.basis;
  const TimeGrid& g = F.grid;
  if (!F.finite()) throw std::invalid_argument("phi: non-finite forcing");
  Trajectory out(b, g, F.ncomp);
  const int nb = b.nbasis, N = g.n;
  const double h = g.dt, span = g.tmax() - g.t0;

  // global weighted scale (log domain), for tail significance tests
  double logw_global = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < N; ++n)
    for (int c = 0; c < F.ncomp; ++c) {
      const double* fc = F.v(n, c);
      for (int k = 0; k < nb; ++k) {
        if (fc[k] == 0) continue;
        double lw = b.lambda(b.deg[k]) * (g.t(n) - g.t0) + std::log(std::abs(fc[k]));
        if (lw > logw_global) logw_global = lw;
      }
    }
  if (!std::isfinite(logw_global)) return out;  // F identically zero

  std::vector<std::string> errors(std::size_t(F.ncomp) * nb);
  parallel_for(std::size_t(F.ncomp) * nb, opt.threads, [&](std::size_t idx) {
    int c = int(idx) / nb, k = int(idx) % nb;
    const int l = b.deg[k];
    const double lam = b.lambda(l);
    std::vector<double> f(N);
    for (int n = 0; n < N; ++n) f[n] = F.v(n, c)[k];
    bool all_zero = true;
    for (double x : f)
      if (x != 0) all_zero = false;
    if (all_zero) return;

    detail::ModeTail tail;
    try {
      std::string label = "(comp " + std::to_string(c) + ", l " + std::to_string(l) + ")";
      tail = detail::close_tail(f, lam, h, span, opt.tail_tol, logw_global, label);
    } catch (const TailError& e) {
      errors[idx] = e.what();
      return;
    }

    if (lam > 0) {
      double ep = tail.use ? tail.fend / (tail.kappa - lam) : 0.0;
      double em = tail.use ? tail.fend / (tail.kappa + lam) : 0.0;
      out.v(N - 1, c)[k] = (ep - em) / (2 * lam);
      out.phi(N - 1, c)[k] = -(ep + em) / 2;
      for (int n = N - 2; n >= 0; --n) {
        ep = std::exp(lam * h) * ep + detail::interval_integral(lam, h, f[n], f[n + 1]);
        em = std::exp(-lam * h) * em + detail::interval_integral(-lam, h, f[n], f[n + 1]);
        out.v(n, c)[k] = (ep - em) / (2 * lam);
        out.phi(n, c)[k] = -(ep + em) / 2;
      }
    } else {
      // l = 0 in d = 2: kernels (tau - t) and 1
      double m0 = tail.use ? tail.fend / tail.kappa : 0.0;
      double m1 = tail.use ? tail.fend / (tail.kappa * tail.kappa) : 0.0;
      out.v(N - 1, c)[k] = m1;
      out.phi(N - 1, c)[k] = -m0;
      for (int n = N - 2; n >= 0; --n) {
        m1 += h * m0 + detail::interval_integral_s(h, f[n], f[n + 1]);
        m0 += detail::interval_integral(0.0, h, f[n], f[n + 1]);
        out.v(n, c)[k] = m1;
        out.phi(n, c)[k] = -m0;
      }
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw TailError(e);
  return out;
}

/// Dirichlet variant: subtracts the linear flow of the scattering
/// correction so the v component vanishes at t0. Returns the trajectory
/// and u_plus (per mode -Phi(F)_v(t0)).
inline std::pair<Trajectory, SpectralField> phi_dirichlet(const Trajectory& F,
                                                          const PhiOptions& opt = {}) {
  const SphereBasis& b = *F.basis;
  Trajectory T = phi(F, opt);
  SpectralField uplus(b, F.ncomp);
  for (int c = 0; c < F.ncomp; ++c)
    for (int k = 0; k < b.nbasis; ++k)
      uplus.c[std::size_t(c) * b.nbasis + k] = -T.v(0, c)[k];
  const TimeGrid& g = F.grid;
  for (int n = 0; n < g.n; ++n) {
    double dtau = g.t(n) - g.t0;
    for (int c = 0; c < F.ncomp; ++c)
      for (int k = 0; k < b.nbasis; ++k) {
        double lam = b.lambda(b.deg[k]);
        double up = uplus.c[std::size_t(c) * b.nbasis + k];
        T.v(n, c)[k] += up * std::exp(-lam * dtau);
        T.phi(n, c)[k] += -lam * up * std::exp(-lam * dtau);
      }
  }
  return {std::move(T), std::move(uplus)};
}

/// Discrete verification that dtt v - D^2 v = F: max over interior nodes
/// of the H^{s-1} defect of the centered second difference, normalized by
/// the larger of the forcing and solution scales.
inline double ode_residual(const Trajectory& T, const Trajectory& F, double s) {
  if (T.grid.n < 3) throw std::invalid_argument("ode_residual: need >= 3 nodes");
  if (!T.grid.same(F.grid) || T.basis != F.basis || T.ncomp != F.ncomp)
    throw std::invalid_argument("ode_residual: shape mismatch");
  const SphereBasis& b = *T.basis;
  const double idt2 = 1.0 / (T.grid.dt * T.grid.dt);
  double worst = 0, scale = 0;
  SpectralField r(b, T.ncomp);
  for (int n = 0; n < T.grid.n; ++n) {
    SpectralField fn(b, T.ncomp), vn(b, T.ncomp);
    for (int c = 0; c < T.ncomp; ++c)
      for (int k = 0; k < b.nbasis; ++k) {
        fn.c[std::size_t(c) * b.nbasis + k] = F.v(n, c)[k];
        vn.c[std::size_t(c) * b.nbasis + k] = T.v(n, c)[k];
      }
    scale = std::max({scale, hs_norm(fn, s - 1), hs_norm(vn, s - 1)});
    if (n == 0 || n == T.grid.n - 1) continue;
    for (int c = 0; c < T.ncomp; ++c)
      for (int k = 0; k < b.nbasis; ++k) {
        double lam = b.lambda(b.deg[k]);
        double dd = (T.v(n - 1, c)[k] - 2 * T.v(n, c)[k] + T.v(n + 1, c)[k]) * idt2;
        r.c[std::size_t(c) * b.nbasis + k] = dd - lam * lam * T.v(n, c)[k] - F.v(n, c)[k];
      }
    worst = std::max(worst, hs_norm(r, s - 1));
  }
  return worst / std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace exsc
