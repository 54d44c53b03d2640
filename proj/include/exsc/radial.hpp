// radial.hpp - independent radial reference solutions of
//   u'' + (d-1)/r u' = kappa u^p    on [1, r_match],
// computed by inward integration from the far-field asymptote
//   u ~ c r^{2-d} + A r^{-k},  k = (d-2)p - 2,  A = kappa c^p / (k (k+2-d)),
// with a secant iteration on c until u(1) matches the boundary value.
// This path never touches the spectral machinery, so it serves as a
// cross-check oracle for radial solves.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace exsc {

struct RadialProfile {
  int d = 3, p = 2;
  double kappa = 1;
  double c_asym = 0;  // fitted coefficient of r^{2-d}
  std::vector<double> r, u, du;  // ascending samples

  /// Piecewise-linear readout between samples; the sample radii
  /// themselves carry the full integrator accuracy.
  double at(double radius) const {
    if (r.empty() || radius < r.front() - 1e-12 || radius > r.back() + 1e-12)
      throw std::out_of_range("RadialProfile: radius outside sampled range");
    auto it = std::lower_bound(r.begin(), r.end(), radius);
    std::size_t i = std::size_t(it - r.begin());
    if (i == 0) return u[0];
    if (i >= r.size()) return u.back();
    double w = (radius - r[i - 1]) / (r[i] - r[i - 1]);
    return (1 - w) * u[i - 1] + w * u[i];
  }
};

namespace detail {
inline double ipow(double x, int n) {
  double out = 1;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}
}  // namespace detail

/// Shooting solver described above. Empty sample_radii selects 512
/// log-spaced radii. Throws on interior blow-up, on failure of the secant
/// to lock on, and on (d,p) pairs whose first far-field correction is
/// resonant.
inline RadialProfile radial_ode_oracle(int d, int p, double kappa, double boundary_value,
                                       std::vector<double> sample_radii = {},
                                       double r_match = 200.0, double tol = 1e-12) {
  namespace ode = boost::numeric::odeint;
  if (d < 3) throw std::invalid_argument("radial_ode_oracle: needs d >= 3");
  if (p < 2) throw std::invalid_argument("radial_ode_oracle: needs p >= 2");
  if (!(r_match > 4.0)) throw std::invalid_argument("radial_ode_oracle: r_match too small");
  const double k = double(d - 2) * p - 2;
  const double denom = k * (k + 2 - d);
  if (std::abs(denom) < 1e-9)
    throw std::invalid_argument("radial_ode_oracle: resonant far-field correction for this (d,p)");

  using State = std::array<double, 2>;
  auto sys = [d, p, kappa](const State& y, State& dy, double r) {
    dy[0] = y[1];
    dy[1] = kappa * detail::ipow(y[0], p) - double(d - 1) / r * y[1];
  };
  const double blow = 1e6 * std::max(1.0, std::abs(boundary_value));
  auto guard = [blow](const State& y, double) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[0]) > blow)
      throw std::runtime_error("radial_ode_oracle: interior blow-up during shooting");
  };
  auto start_state = [&](double c) {
    double A = kappa * detail::ipow(c, p) / denom;
    State y;
    y[0] = c * std::pow(r_match, 2.0 - d) + A * std::pow(r_match, -k);
    y[1] = (2.0 - d) * c * std::pow(r_match, 1.0 - d) - k * A * std::pow(r_match, -k - 1);
    return y;
  };
  auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(tol, tol);
  auto shoot = [&](double c) {
    State y = start_state(c);
    ode::integrate_adaptive(stepper, sys, y, r_match, 1.0, -1e-3, guard);
    return y;
  };

  // secant on the asymptotic coefficient
  const double target_tol = tol * 100 * std::max(1.0, std::abs(boundary_value));
  double c0 = boundary_value;
  double g0 = shoot(c0)[0] - boundary_value;
  double c_star = c0;
  if (std::abs(g0) > target_tol) {
    double c1 = boundary_value * 1.05 + (boundary_value == 0 ? 0.01 : 0.0);
    double g1 = shoot(c1)[0] - boundary_value;
    int it = 0;
    while (std::abs(g1) > target_tol) {
      if (++it > 60 || g1 == g0)
        throw std::runtime_error("radial_ode_oracle: shooting did not converge");
      double c2 = c1 - g1 * (c1 - c0) / (g1 - g0);
      c0 = c1;
      g0 = g1;
      c1 = c2;
      g1 = shoot(c1)[0] - boundary_value;
    }
    c_star = c1;
  }

  // record pass: stop exactly at the requested radii
  if (sample_radii.empty()) {
    const int n = 512;
    for (int i = 0; i < n; ++i)
      sample_radii.push_back(std::exp(std::log(r_match) * i / double(n - 1)));
  }
  std::vector<double> radii = sample_radii;
  std::sort(radii.begin(), radii.end());
  if (radii.front() < 1.0 - 1e-12 || radii.back() > r_match + 1e-12)
    throw std::invalid_argument("radial_ode_oracle: sample radii outside [1, r_match]");

  RadialProfile prof;
  prof.d = d;
  prof.p = p;
  prof.kappa = kappa;
  prof.c_asym = c_star;
  State y = start_state(c_star);
  double rcur = r_match;
  for (auto it = radii.rbegin(); it != radii.rend(); ++it) {
    if (*it < rcur - 1e-14)
      ode::integrate_adaptive(stepper, sys, y, rcur, *it, -1e-3, guard);
    rcur = *it;
    prof.r.push_back(rcur);
    prof.u.push_back(y[0]);
    prof.du.push_back(y[1]);
  }
  std::reverse(prof.r.begin(), prof.r.end());
  std::reverse(prof.u.begin(), prof.u.end());
  std::reverse(prof.du.begin(), prof.du.end());
  return prof;
}

}  // namespace exsc
