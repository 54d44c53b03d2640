// traj.hpp - uniform time grids and cylinder trajectories (v, dt v).
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sphere.hpp"

namespace exsc {

/// Nodes t0 + k dt, k = 0 .. n-1.
struct TimeGrid {
  double t0 = 0;
  double dt = 0;
  int n = 0;

  static TimeGrid make(double t0, double tmax, double dt) {
    if (!(dt > 0) || !(tmax > t0)) throw std::invalid_argument("TimeGrid: need tmax > t0, dt > 0");
    TimeGrid g;
    g.t0 = t0;
    g.dt = dt;
    g.n = int(std::lround((tmax - t0) / dt)) + 1;
    if (g.n < 2) throw std::invalid_argument("TimeGrid: fewer than two nodes");
    return g;
  }
  double t(int k) const { return t0 + k * dt; }
  double tmax() const { return t(n - 1); }
  bool same(const TimeGrid& o) const { return t0 == o.t0 && dt == o.dt && n == o.n; }
};

/// Stored pair (v, phi) per node; phi is the time-derivative slot that the
/// Duhamel operators fill. Layout: node-major, then v slice before phi
/// slice, each component-major with (l,m)-ascending coefficients.
struct Trajectory {
  const SphereBasis* basis = nullptr;
  TimeGrid grid;
  int ncomp = 1;
  std::vector<double> data;

  Trajectory() = default;
  Trajectory(const SphereBasis& b, const TimeGrid& g, int n)
      : basis(&b), grid(g), ncomp(n),
        data(std::size_t(g.n) * 2 * n * b.nbasis, 0.0) {
    assert(n >= 1);
  }

  std::size_t slice() const { return std::size_t(basis->nbasis); }
  std::size_t node_stride() const { return 2 * std::size_t(ncomp) * slice(); }

  double* v(int node, int comp = 0) {
    return data.data() + node * node_stride() + std::size_t(comp) * slice();
  }
  const double* v(int node, int comp = 0) const {
    return data.data() + node * node_stride() + std::size_t(comp) * slice();
  }
  double* phi(int node, int comp = 0) {
    return data.data() + node * node_stride() + (std::size_t(ncomp) + comp) * slice();
  }
  const double* phi(int node, int comp = 0) const {
    return data.data() + node * node_stride() + (std::size_t(ncomp) + comp) * slice();
  }

  SpectralField v_field(int node) const { return extract(node, false); }
  SpectralField phi_field(int node) const { return extract(node, true); }

  void set_v(int node, const SpectralField& f) { insert(node, false, f); }
  void set_phi(int node, const SpectralField& f) { insert(node, true, f); }

  bool finite() const {
    for (double x : data)
      if (!std::isfinite(x)) return false;
    return true;
  }

 private:
  SpectralField extract(int node, bool deriv) const {
    assert(node >= 0 && node < grid.n);
    SpectralField f(*basis, ncomp);
    for (int c = 0; c < ncomp; ++c) {
      const double* src = deriv ? phi(node, c) : v(node, c);
      std::copy(src, src + slice(), f.c.begin() + std::size_t(c) * slice());
    }
    return f;
  }
  void insert(int node, bool deriv, const SpectralField& f) {
    assert(node >= 0 && node < grid.n);
    if (f.basis != basis || f.ncomp != ncomp)
      throw std::invalid_argument("Trajectory: field shape mismatch");
    for (int c = 0; c < ncomp; ++c) {
      double* dst = deriv ? phi(node, c) : v(node, c);
      std::copy(f.c.begin() + std::size_t(c) * slice(),
                f.c.begin() + std::size_t(c + 1) * slice(), dst);
    }
  }
};

}  // namespace exsc
