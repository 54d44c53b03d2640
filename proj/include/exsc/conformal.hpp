// conformal.hpp - change of variables between exterior/interior functions
// and half-cylinder trajectories, the linear flow, harmonic extensions.
//
// Infinity orientation: t = log|x|,  v(t,y) = e^{(d-2)t/2} u(e^t y).
// Zero orientation:     t = -log|x|, v(t,y) = e^{-(d-2)t/2} u(e^{-t} y).
// Both send the decaying/interior harmonic branch to v_L(t) = e^{-t D} u0,
// which is what makes one Duhamel machine serve the two problems.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "norms.hpp"
#include "traj.hpp"

namespace exsc {

/// Anchoring of the cylinder to physical space.
struct ConformalFrame {
  int d = 3;
  Orientation orient = Orientation::infinity_;
  double r0 = 1.0;
  double t0 = 0.0;  // |log r0|

  static ConformalFrame infinity(int d, double r0 = 1.0) {
    if (!(r0 >= 1.0)) throw std::invalid_argument("ConformalFrame: infinity needs r0 >= 1");
    return {d, Orientation::infinity_, r0, std::log(r0)};
  }
  static ConformalFrame zero(int d, double r0 = 1.0) {
    if (!(r0 > 0 && r0 <= 1.0)) throw std::invalid_argument("ConformalFrame: zero needs 0 < r0 <= 1");
    return {d, Orientation::zero, r0, -std::log(r0)};
  }
  /// Sphere radius carrying the data of cylinder time t.
  double radius(double t) const {
    return orient == Orientation::infinity_ ? std::exp(t) : std::exp(-t);
  }
  /// Conformal weight: u(x) = radius^{-w} v, v = radius^{w} u, w = (d-2)/2.
  double vweight(double t) const {
    return std::exp(0.5 * (d - 2) * (orient == Orientation::infinity_ ? t : -t));
  }
};

/// Multi-component function of a physical point x in R^d.
struct PhysicalSampler {
  int d = 3;
  int ncomp = 1;
  std::function<void(const double* x, double* out)> eval;
};

/// S(t-t0) applied to no-growing-mode data (u0, -D u0): returns the pair
/// (e^{-(t-t0)D} u0, -D e^{-(t-t0)D} u0).
inline std::pair<SpectralField, SpectralField> linear_flow(const SpectralField& u0,
                                                           double t, double t0) {
  if (t < t0) throw std::invalid_argument("linear_flow: t < t0");
  const SphereBasis& b = *u0.basis;
  SpectralField v(b, u0.ncomp), w(b, u0.ncomp);
  for (int c = 0; c < u0.ncomp; ++c)
    for (int k = 0; k < b.nbasis; ++k) {
      double lam = b.lambda(b.deg[k]);
      double x = u0.c[std::size_t(c) * b.nbasis + k] * std::exp(-lam * (t - t0));
      v.c[std::size_t(c) * b.nbasis + k] = x;
      w.c[std::size_t(c) * b.nbasis + k] = -lam * x;
    }
  return {v, w};
}

/// Full linear trajectory v_L on a grid anchored at grid.t0.
inline Trajectory linear_trajectory(const SpectralField& u0, const TimeGrid& grid) {
  Trajectory T(*u0.basis, grid, u0.ncomp);
  for (int n = 0; n < grid.n; ++n) {
    auto [v, w] = linear_flow(u0, grid.t(n), grid.t0);
    T.set_v(n, v);
    T.set_phi(n, w);
  }
  return T;
}

/// Mode-wise harmonic extension of a trace u0 on the unit sphere:
/// exterior (decaying branch) r^{-(l+d-2)}, interior r^l. Radii recomputed
/// from sampled coordinates land a few ulp past the sphere, so the domain
/// gates carry the same relative slack as the cylinder samplers.
inline SpectralField harmonic_extension(const SpectralField& u0, Orientation o, double r) {
  if (o == Orientation::infinity_ && r >= 1.0 - 1e-9 && r < 1.0) r = 1.0;
  if (o == Orientation::zero && r <= 1.0 + 1e-9 && r > 1.0) r = 1.0;
  if (o == Orientation::infinity_ && !(r >= 1.0))
    throw std::invalid_argument("harmonic_extension: exterior needs r >= 1");
  if (o == Orientation::zero && !(r > 0 && r <= 1.0))
    throw std::invalid_argument("harmonic_extension: interior needs 0 < r <= 1");
  const SphereBasis& b = *u0.basis;
  SpectralField out = u0;
  for (int c = 0; c < u0.ncomp; ++c)
    for (int k = 0; k < b.nbasis; ++k) {
      int l = b.deg[k];
      double p = o == Orientation::infinity_ ? -double(l + b.d - 2) : double(l);
      out.c[std::size_t(c) * b.nbasis + k] *= std::pow(r, p);
    }
  return out;
}

/// Sample a physical function into cylinder variables on the given grid.
/// The phi slot is filled by centered differences (one-sided at the ends);
/// callers that own exact derivatives should overwrite it.
inline Trajectory to_cylinder(const PhysicalSampler& u, const ConformalFrame& frame,
                              const SphereBasis& basis, const TimeGrid& grid) {
  if (u.d != frame.d || basis.d != frame.d)
    throw std::invalid_argument("to_cylinder: dimension mismatch");
  Trajectory T(basis, grid, u.ncomp);
  std::vector<double> x(frame.d), val(u.ncomp);
  GridField g(basis, u.ncomp);
  for (int n = 0; n < grid.n; ++n) {
    double t = grid.t(n);
    double r = frame.radius(t), w = frame.vweight(t);
    for (int j = 0; j < basis.ngrid; ++j) {
      for (int i = 0; i < frame.d; ++i) x[i] = r * basis.ynode[std::size_t(j) * frame.d + i];
      u.eval(x.data(), val.data());
      for (int c = 0; c < u.ncomp; ++c) g.v[std::size_t(c) * basis.ngrid + j] = w * val[c];
    }
    T.set_v(n, basis.analyze(g));
  }
  for (int n = 0; n < grid.n; ++n) {
    int a = std::max(0, n - 1), b = std::min(grid.n - 1, n + 1);
    double h = grid.dt * (b - a);
    for (int c = 0; c < u.ncomp; ++c)
      for (int k = 0; k < basis.nbasis; ++k)
        T.phi(n, c)[k] = (T.v(b, c)[k] - T.v(a, c)[k]) / h;
  }
  return T;
}

/// Physical values of u on the collocation sphere of node `node`.
inline GridField node_sphere_values(const Trajectory& T, int node, const ConformalFrame& frame) {
  GridField g = T.basis->synthesize(T.v_field(node));
  double iw = 1.0 / frame.vweight(T.grid.t(node));
  for (double& x : g.v) x *= iw;
  return g;
}

/// Interpolating physical sampler from a stored trajectory. Between nodes
/// the pair (v, dt_v) supports cubic Hermite interpolation, so off-node
/// accuracy is O(dt^4); node radii are exact.
inline PhysicalSampler from_cylinder(const Trajectory& T, const ConformalFrame& frame) {
  const SphereBasis* basis = T.basis;
  const Trajectory* traj = &T;
  ConformalFrame fr = frame;
  PhysicalSampler s;
  s.d = frame.d;
  s.ncomp = T.ncomp;
  s.eval = [basis, traj, fr](const double* x, double* out) {
    double r = 0;
    for (int i = 0; i < fr.d; ++i) r += x[i] * x[i];
    r = std::sqrt(r);
    if (!(r > 0)) throw std::invalid_argument("from_cylinder: sample at the origin");
    double t = fr.orient == Orientation::infinity_ ? std::log(r) : -std::log(r);
    const TimeGrid& g = traj->grid;
    if (t < g.t0 - 1e-9 || t > g.tmax() + 1e-9)
      throw std::invalid_argument("from_cylinder: radius outside stored range");
    int n0 = std::clamp(int((t - g.t0) / g.dt), 0, g.n - 2);
    double a = std::clamp((t - g.t(n0)) / g.dt, 0.0, 1.0);
    std::vector<double> y(fr.d), v0(traj->ncomp), v1(traj->ncomp), m0(traj->ncomp),
        m1(traj->ncomp);
    for (int i = 0; i < fr.d; ++i) y[i] = x[i] / r;
    basis->eval_point(traj->v_field(n0), y.data(), v0.data());
    basis->eval_point(traj->v_field(n0 + 1), y.data(), v1.data());
    basis->eval_point(traj->phi_field(n0), y.data(), m0.data());
    basis->eval_point(traj->phi_field(n0 + 1), y.data(), m1.data());
    double h00 = (1 + 2 * a) * (1 - a) * (1 - a), h10 = a * (1 - a) * (1 - a);
    double h01 = a * a * (3 - 2 * a), h11 = a * a * (a - 1);
    double w = 1.0 / fr.vweight(t);
    for (int c = 0; c < traj->ncomp; ++c)
      out[c] = w * (h00 * v0[c] + h01 * v1[c] + g.dt * (h10 * m0[c] + h11 * m1[c]));
  };
  return s;
}

/// Cartesian gradient of u on the sphere of node `node`, from the stored
/// pair (v, phi) and the exact tangential derivative tables:
///   infinity: grad u = e^{-dt/2} ( -(d-2)/2 y v + y dt_v + grad_y v )
///   zero:     grad u = e^{+dt/2} ( -(d-2)/2 y v - y dt_v + grad_y v )
/// Output components are (comp, axis) pairs: slot comp*d + i.
inline GridField reconstruct_gradient(const Trajectory& T, int node, const ConformalFrame& frame) {
  const SphereBasis& b = *T.basis;
  const int d = b.d, N = T.ncomp;
  double t = T.grid.t(node);
  double scale = std::exp((frame.orient == Orientation::infinity_ ? -0.5 : 0.5) * d * t);
  double tsgn = frame.orient == Orientation::infinity_ ? 1.0 : -1.0;
  GridField out(b, N * d);
  GridField v = b.synthesize(T.v_field(node));
  GridField w = b.synthesize(T.phi_field(node));
  SpectralField vf = T.v_field(node);
  std::vector<double> dv(b.ngrid);
  for (int c = 0; c < N; ++c)
    for (int i = 0; i < d; ++i) {
      b.apply_Di_grid(vf, i, c, dv.data());
      double* slot = out.v.data() + (std::size_t(c) * d + i) * b.ngrid;
      const double* vc = v.v.data() + std::size_t(c) * b.ngrid;
      const double* wc = w.v.data() + std::size_t(c) * b.ngrid;
      for (int j = 0; j < b.ngrid; ++j) {
        double yi = b.ynode[std::size_t(j) * d + i];
        slot[j] = scale * (yi * (-0.5 * (d - 2) * vc[j] + tsgn * wc[j]) + dv[j]);
      }
    }
  return out;
}

}  // namespace exsc
