// norms.hpp - weighted Sobolev norms on sphere data and trajectories.
//
// All exponentially weighted sums run in log domain (log-sum-exp): the
// per-degree weight e^{2(l+(d-2)/2)t} overflows doubles already for
// moderate (l, t), while the summands log-side stay small because decaying
// data cancels the weight. Linear-domain results are exposed too and may
// legitimately be +inf.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "traj.hpp"
#include "util.hpp"

namespace exsc {

enum class Orientation { infinity_, zero };

/// log ||P_l v|| (all components pooled); -inf when the shell is empty.
inline double shell_log(const SpectralField& v, int l) {
  const SphereBasis& b = *v.basis;
  double ss = 0;
  for (int c = 0; c < v.ncomp; ++c)
    for (int m = 0; m < b.nm(l); ++m) {
      double x = v.c[std::size_t(c) * b.nbasis + b.offset(l) + m];
      ss += x * x;
    }
  return ss == 0 ? -std::numeric_limits<double>::infinity() : 0.5 * std::log(ss);
}

/// log of the Y_{s,t} norm: 1/2 log sum_l <l>^{2s} e^{2 lambda_l t} ||P_l v||^2.
inline double y_norm_log(const SpectralField& v, double s, double t) {
  if (t < 0) throw std::invalid_argument("y_norm: t < 0");
  const SphereBasis& b = *v.basis;
  std::vector<double> terms;
  terms.reserve(b.lmax + 1);
  for (int l = 0; l <= b.lmax; ++l) {
    double sl = shell_log(v, l);
    if (!std::isfinite(sl) && sl < 0) continue;
    terms.push_back(2.0 * (s * 0.5 * std::log1p(double(l) * l) + b.lambda(l) * t + sl));
  }
  return 0.5 * log_sum_exp(terms);
}

inline double y_norm(const SpectralField& v, double s, double t) {
  return std::exp(y_norm_log(v, s, t));
}

/// H^s norm = Y_{s,0}.
inline double hs_norm(const SpectralField& v, double s) { return y_norm(v, s, 0.0); }

/// log of Z^infty_{s,r} (weights r^{l+d-2}) or Z^0_{s,r} (weights r^{-l}),
/// through the identity Z_{s,r} = r^{(d-2)/2} Y_{s, +-log r}.
inline double z_norm_log(const SpectralField& v, double s, double r, Orientation o) {
  const int d = v.basis->d;
  if (o == Orientation::infinity_ && r < 1)
    throw std::invalid_argument("z_norm: infinity orientation needs r >= 1");
  if (o == Orientation::zero && !(r > 0 && r <= 1))
    throw std::invalid_argument("z_norm: zero orientation needs 0 < r <= 1");
  double t = o == Orientation::infinity_ ? std::log(r) : -std::log(r);
  return 0.5 * (d - 2) * std::log(r) + y_norm_log(v, s, t);
}

inline double z_norm(const SpectralField& v, double s, double r, Orientation o) {
  return std::exp(z_norm_log(v, s, r, o));
}

namespace detail {
/// log(||v(node)||_{Y_{s,t-t0}} + ||phi(node)||_{Y_{s-1,t-t0}}).
inline double node_pair_log(const Trajectory& T, int node, double s, double t0) {
  double tau = T.grid.t(node) - t0;
  double a = y_norm_log(T.v_field(node), s, tau);
  double b = y_norm_log(T.phi_field(node), s - 1.0, tau);
  return log_sum_exp({a, b});
}
}  // namespace detail

/// Discrete sup over nodes tau >= t of the solution/derivative pair norm
/// with weight anchor t0. argsup (optional) receives the attaining node index.
inline double traj_norm_log(const Trajectory& T, double s, double t, double t0,
                            int* argsup = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  int arg = -1;
  bool any = false;
  for (int n = 0; n < T.grid.n; ++n) {
    if (T.grid.t(n) < t - 1e-12) continue;
    any = true;
    double val = detail::node_pair_log(T, n, s, t0);
    if (val > best) {
      best = val;
      arg = n;
    }
  }
  if (!any) throw std::invalid_argument("traj_norm: no nodes at or after t");
  if (argsup) *argsup = arg;
  return best;
}

inline double traj_norm(const Trajectory& T, double s, double t, double t0,
                        int* argsup = nullptr) {
  return std::exp(traj_norm_log(T, s, t, t0, argsup));
}

struct XNorm {
  double value = 0;
  double log_value = -std::numeric_limits<double>::infinity();
  int argsup = -1;
  bool unbounded = false;  // sup attained in the trailing part of the grid
};

/// sup_{t >= t0} e^{nu (t - t1)} ||.||_{Y^{t1}-pair from t}; the inner sup
/// is a suffix maximum so the whole evaluation is one backward sweep.
inline XNorm x_nu_norm(const Trajectory& T, double s, double nu, double t0, double t1) {
  if (!(nu > 0)) throw std::invalid_argument("x_nu_norm: nu must be positive");
  const int n = T.grid.n;
  std::vector<double> node_log(n);
  for (int k = 0; k < n; ++k) node_log[k] = detail::node_pair_log(T, k, s, t1);
  // suffix max of the inner pair norms
  for (int k = n - 2; k >= 0; --k) node_log[k] = std::max(node_log[k], node_log[k + 1]);
  XNorm out;
  int usable = 0;
  for (int k = 0; k < n; ++k) {
    double tk = T.grid.t(k);
    if (tk < t0 - 1e-12) continue;
    ++usable;
    double val = nu * (tk - t1) + node_log[k];
    if (val > out.log_value) {
      out.log_value = val;
      out.argsup = k;
    }
  }
  if (usable == 0) throw std::invalid_argument("x_nu_norm: no nodes at or after t0");
  out.value = std::exp(out.log_value);
  // weight grows with t, so a sup pinned near T_max means the true sup
  // over [t0, infinity) is not captured by this grid
  out.unbounded = out.argsup >= T.grid.n - std::max(1, T.grid.n / 10);
  return out;
}

}  // namespace exsc
