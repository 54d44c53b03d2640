// sphere.hpp - discrete spherical-harmonic calculus on S^1 and S^2.
//
// Real orthonormal bases, oversampled collocation grids for dealiased
// products, the first-order operators D (square root of the shifted
// Laplace-Beltrami operator), the tangential derivatives D_i, and the
// degree-lowering combinations R_i = D_i + y_i (D - (d-2)/2).
//
// Everything is dense and quadrature-based: transforms cost
// O(nbasis * ngrid), which is the right trade for the mode counts used
// here (lmax <= a few dozen) and keeps every operator exact in the band.
#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "util.hpp"

namespace exsc {

struct SphereBasis;

/// Coefficients of a real harmonic expansion, indexed (component, l, m),
/// band-limited to basis.lmax. Components are stored contiguously.
struct SpectralField {
  const SphereBasis* basis = nullptr;
  int ncomp = 1;
  std::vector<double> c;

  SpectralField() = default;
  SpectralField(const SphereBasis& b, int n);
  double& at(int comp, int l, int m);
  double at(int comp, int l, int m) const;
};

/// Values on the collocation grid, same component layout.
struct GridField {
  const SphereBasis* basis = nullptr;
  int ncomp = 1;
  std::vector<double> v;

  GridField() = default;
  GridField(const SphereBasis& b, int n);
};

namespace detail {

/// Gauss-Legendre nodes (ascending) and weights on [-1,1] by Newton
/// iteration on the three-term recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - double(j) * p2) / double(j + 1);
      }
      pp = double(n) * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

/// Fully normalized associated Legendre values q_l^m(theta) for all
/// 0 <= m <= l <= L at one colatitude, flat index l*(l+1)/2 + m.
/// Normalization: integral of q^2 sin(theta) dtheta over [0,pi] is 1.
inline std::vector<double> legendre_table(int L, double ct, double st) {
  auto id = [](int l, int m) { return l * (l + 1) / 2 + m; };
  std::vector<double> q(std::size_t(L + 1) * (L + 2) / 2, 0.0);
  q[0] = std::sqrt(0.5);
  for (int m = 1; m <= L; ++m)
    q[id(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * q[id(m - 1, m - 1)];
  for (int m = 0; m < L; ++m)
    q[id(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * q[id(m, m)];
  for (int m = 0; m <= L; ++m)
    for (int l = m + 2; l <= L; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      double b = std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) /
                           ((l - 1.0) * (l - 1.0) - double(m) * m));
      q[id(l, m)] = a * (ct * q[id(l - 1, m)] - q[id(l - 2, m)] / b);
    }
  return q;
}

}  // namespace detail

/// Shared discrete basis: grid, weights, basis-function table, and the
/// precomputed derivative operators. Construct once, treat as immutable.
struct SphereBasis {
  int d = 3;
  int lmax = 0;
  int oversample = 4;
  int nbasis = 0;      // modes with l <= lmax
  int nbasis_ext = 0;  // internal band l <= lmax+1, used for exact gradients
  int ntheta = 0, nphi = 0, ngrid = 0;

  std::vector<double> theta;   // d=2: all nodes; d=3: colatitudes
  std::vector<double> phi;     // d=3 longitudes
  std::vector<double> weight;  // quadrature weight per grid node
  std::vector<double> ynode;   // unit-vector coordinates, node-major [g*d+i]

  // Basis values, row k (ext band) over grid nodes.
  std::vector<double> bval;
  // Tangential derivative of each public basis function, evaluated on the
  // grid: grad[i] is ngrid x nbasis, column-major in k (row g contiguous
  // per k). Exact including the top shell (built through the ext band).
  std::array<std::vector<double>, 3> grad;
  // Coefficient-space operators on the public band. dcoef truncates the
  // lmax+1 content of D_i (exact only for l-content <= lmax-1); rcoef is
  // exact for the whole band since R_i lowers degree.
  std::array<std::vector<double>, 3> dcoef, rcoef;

  std::vector<int> deg;  // degree l of ext-band mode k

  /// Number of m-slots at degree l.
  int nm(int l) const { return d == 2 ? (l == 0 ? 1 : 2) : 2 * l + 1; }
  /// Flat index of (l, m). d=2 uses m = -l (sine) and m = +l (cosine),
  /// with m = 0 for the constant; d=3 uses m in [-l, l] (negative = sine).
  int index(int l, int m) const {
    if (d == 2) {
      if (l == 0) return 0;
      assert(m == l || m == -l);
      return 2 * l - 1 + (m > 0 ? 1 : 0);
    }
    assert(m >= -l && m <= l);
    return l * l + m + l;
  }
  /// Eigenvalue of D at degree l.
  double lambda(int l) const { return double(l) + 0.5 * (d - 2); }

  static SphereBasis make(int d, int lmax, int oversample = 4) {
    if (d != 2 && d != 3) throw std::invalid_argument("SphereBasis: d must be 2 or 3");
    if (lmax < 1 || oversample < 2)
      throw std::invalid_argument("SphereBasis: need lmax >= 1, oversample >= 2");
    SphereBasis b;
    b.d = d;
    b.lmax = lmax;
    b.oversample = oversample;
    const int Lx = lmax + 1;
    b.nbasis = d == 2 ? 2 * lmax + 1 : (lmax + 1) * (lmax + 1);
    b.nbasis_ext = d == 2 ? 2 * Lx + 1 : (Lx + 1) * (Lx + 1);
    b.deg.assign(b.nbasis_ext, 0);
    for (int l = 0; l <= Lx; ++l)
      for (int m = 0; m < b.nm(l); ++m) b.deg[b.offset(l) + m] = l;

    const int target = oversample * lmax;  // exactness degree for products
    if (d == 2) {
      b.ntheta = std::max(target + 1, 8);
      b.nphi = 1;
      b.ngrid = b.ntheta;
      b.theta.resize(b.ngrid);
      b.weight.assign(b.ngrid, 2.0 * std::numbers::pi / b.ngrid);
      b.ynode.resize(std::size_t(b.ngrid) * 2);
      for (int j = 0; j < b.ngrid; ++j) {
        b.theta[j] = 2.0 * std::numbers::pi * j / b.ngrid;
        b.ynode[2 * j] = std::cos(b.theta[j]);
        b.ynode[2 * j + 1] = std::sin(b.theta[j]);
      }
    } else {
      b.ntheta = std::max(target / 2 + 1, 4);
      b.nphi = std::max(target + 1, 8);
      b.ngrid = b.ntheta * b.nphi;
      std::vector<double> x, w;
      detail::gauss_legendre(b.ntheta, x, w);
      b.theta.resize(b.ntheta);
      b.phi.resize(b.nphi);
      for (int a = 0; a < b.ntheta; ++a) b.theta[a] = std::acos(x[b.ntheta - 1 - a]);
      for (int p = 0; p < b.nphi; ++p) b.phi[p] = 2.0 * std::numbers::pi * p / b.nphi;
      b.weight.resize(b.ngrid);
      b.ynode.resize(std::size_t(b.ngrid) * 3);
      for (int a = 0; a < b.ntheta; ++a) {
        double ct = std::cos(b.theta[a]), st = std::sin(b.theta[a]);
        double wa = w[b.ntheta - 1 - a] * 2.0 * std::numbers::pi / b.nphi;
        for (int p = 0; p < b.nphi; ++p) {
          int g = a * b.nphi + p;
          b.weight[g] = wa;
          b.ynode[3 * g] = st * std::cos(b.phi[p]);
          b.ynode[3 * g + 1] = st * std::sin(b.phi[p]);
          b.ynode[3 * g + 2] = ct;
        }
      }
    }

    b.fill_basis_table();
    b.build_derivatives();
    return b;
  }

  // ---- transforms ------------------------------------------------------

  GridField synthesize(const SpectralField& f) const {
    check_field(f.basis, "synthesize");
    GridField g(*this, f.ncomp);
    for (int n = 0; n < f.ncomp; ++n) {
      const double* c = f.c.data() + std::size_t(n) * nbasis;
      double* out = g.v.data() + std::size_t(n) * ngrid;
      for (int k = 0; k < nbasis; ++k) {
        double ck = c[k];
        if (ck == 0) continue;
        const double* row = bval.data() + std::size_t(k) * ngrid;
        for (int j = 0; j < ngrid; ++j) out[j] += ck * row[j];
      }
    }
    return g;
  }

  SpectralField analyze(const GridField& g) const {
    check_field(g.basis, "analyze");
    for (double x : g.v)
      if (!std::isfinite(x)) throw std::invalid_argument("analyze: non-finite grid value");
    SpectralField f(*this, g.ncomp);
    std::vector<double> wg(ngrid);
    for (int n = 0; n < g.ncomp; ++n) {
      const double* in = g.v.data() + std::size_t(n) * ngrid;
      for (int j = 0; j < ngrid; ++j) wg[j] = weight[j] * in[j];
      double* c = f.c.data() + std::size_t(n) * nbasis;
      for (int k = 0; k < nbasis; ++k) {
        const double* row = bval.data() + std::size_t(k) * ngrid;
        double acc = 0;
        for (int j = 0; j < ngrid; ++j) acc += wg[j] * row[j];
        c[k] = acc;
      }
    }
    return f;
  }

  /// Degree-l projection (zero outside l); l > lmax gives the zero field.
  SpectralField project(const SpectralField& f, int l) const {
    check_field(f.basis, "project");
    SpectralField out(*this, f.ncomp);
    if (l < 0 || l > lmax) return out;
    for (int n = 0; n < f.ncomp; ++n)
      for (int m = 0; m < nm(l); ++m) {
        int k = offset(l) + m;
        out.c[std::size_t(n) * nbasis + k] = f.c[std::size_t(n) * nbasis + k];
      }
    return out;
  }

  /// Apply D: multiply degree-l coefficients by l + (d-2)/2.
  SpectralField apply_D(const SpectralField& f) const {
    check_field(f.basis, "apply_D");
    SpectralField out = f;
    for (int n = 0; n < f.ncomp; ++n)
      for (int k = 0; k < nbasis; ++k)
        out.c[std::size_t(n) * nbasis + k] *= lambda(deg[k]);
    return out;
  }

  /// Pointwise product via the oversampled grid. Exact for band-limited
  /// factors (support in [|l1-l2|, l1+l2]); the dropped l > lmax content
  /// is reported through *truncation (discrete L2 norm) when non-null.
  SpectralField multiply(const SpectralField& f, const SpectralField& g,
                         double* truncation = nullptr) const {
    check_field(f.basis, "multiply");
    check_field(g.basis, "multiply");
    if (f.ncomp != 1 || g.ncomp != 1)
      throw std::invalid_argument("multiply: scalar fields only");
    GridField a = synthesize(f), b = synthesize(g);
    double l2grid = 0;
    for (int j = 0; j < ngrid; ++j) {
      a.v[j] *= b.v[j];
      l2grid += weight[j] * a.v[j] * a.v[j];
    }
    SpectralField out = analyze(a);
    if (truncation) {
      double l2band = 0;
      for (double ck : out.c) l2band += ck * ck;
      *truncation = std::sqrt(std::max(0.0, l2grid - l2band));
    }
    return out;
  }

  /// Tangential derivative D_i = e_i . grad_{S^{d-1}}, coefficient space.
  /// Exact when the input has no l = lmax content (the l = lmax + 1 part
  /// of the result falls outside the band and is dropped).
  SpectralField apply_Di(const SpectralField& f, int i) const {
    return apply_op(f, i, dcoef, "apply_Di");
  }

  /// R_i = D_i + y_i (D - (d-2)/2); lowers degree by exactly one, exact
  /// on the whole band.
  SpectralField apply_Ri(const SpectralField& f, int i) const {
    return apply_op(f, i, rcoef, "apply_Ri");
  }

  /// Grid values of D_i f, exact for every l <= lmax (computed through
  /// the extended band, nothing truncated).
  void apply_Di_grid(const SpectralField& f, int i, int comp, double* out) const {
    check_field(f.basis, "apply_Di_grid");
    if (i < 0 || i >= d) throw std::invalid_argument("apply_Di_grid: axis out of range");
    const double* c = f.c.data() + std::size_t(comp) * nbasis;
    const double* M = grad[i].data();
    for (int j = 0; j < ngrid; ++j) out[j] = 0;
    for (int k = 0; k < nbasis; ++k) {
      double ck = c[k];
      if (ck == 0) continue;
      const double* col = M + std::size_t(k) * ngrid;
      for (int j = 0; j < ngrid; ++j) out[j] += ck * col[j];
    }
  }

  /// Expansion of the monomial y^alpha restricted to the sphere; content
  /// sits at degrees |alpha|, |alpha|-2, ...
  SpectralField poly_to_sh(const std::vector<int>& alpha) const {
    if (int(alpha.size()) != d) throw std::invalid_argument("poly_to_sh: need d exponents");
    int total = 0;
    for (int e : alpha) {
      if (e < 0) throw std::invalid_argument("poly_to_sh: negative exponent");
      total += e;
    }
    if (total > lmax) throw std::invalid_argument("poly_to_sh: |alpha| > lmax");
    GridField g(*this, 1);
    for (int j = 0; j < ngrid; ++j) {
      double p = 1;
      for (int i = 0; i < d; ++i)
        for (int e = 0; e < alpha[i]; ++e) p *= ynode[std::size_t(j) * d + i];
      g.v[j] = p;
    }
    return analyze(g);
  }

  /// sup|Y_l| / ||Y_l||_2 for one real basis function: the zonal harmonic for
  /// d = 3 (sup at the poles, off the Gauss grid), the cosine mode for d = 2
  /// (sup at theta = 0, which is a grid node).
  double sogge_ratio(int l) const {
    if (l < 0 || l > lmax) throw std::invalid_argument("sogge_ratio: l out of band");
    SpectralField f(*this, 1);
    f.at(0, l, d == 2 ? l : 0) = 1.0;
    GridField g = synthesize(f);
    double sup = 0, l2 = 0;
    for (int j = 0; j < ngrid; ++j) {
      sup = std::max(sup, std::abs(g.v[j]));
      l2 += weight[j] * g.v[j] * g.v[j];
    }
    if (d == 3) {
      for (double ct : {1.0, -1.0}) {
        auto q = detail::legendre_table(l, ct, 0.0);
        sup = std::max(sup, std::abs(q[std::size_t(l) * (l + 1) / 2] /
                                     std::sqrt(2.0 * std::numbers::pi)));
      }
    }
    return sup / std::sqrt(l2);
  }

  /// Evaluate a field at an arbitrary unit vector y (off-grid); out has
  /// ncomp slots. Slow path (fresh Legendre table per call), meant for
  /// oracles and I/O, not inner loops.
  void eval_point(const SpectralField& f, const double* y, double* out) const {
    check_field(f.basis, "eval_point");
    std::vector<double> bv(nbasis);
    if (d == 2) {
      double th = std::atan2(y[1], y[0]);
      const double is2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      const double ispi = 1.0 / std::sqrt(std::numbers::pi);
      bv[0] = is2pi;
      for (int l = 1; l <= lmax; ++l) {
        bv[offset(l)] = std::sin(l * th) * ispi;
        bv[offset(l) + 1] = std::cos(l * th) * ispi;
      }
    } else {
      double ct = std::clamp(y[2], -1.0, 1.0);
      double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      double ph = std::atan2(y[1], y[0]);
      auto q = detail::legendre_table(lmax, ct, st);
      const double is2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      const double ispi = 1.0 / std::sqrt(std::numbers::pi);
      for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
          double ql = q[std::size_t(l) * (l + 1) / 2 + std::abs(m)];
          bv[offset(l) + m + l] = m == 0 ? ql * is2pi
                                 : m > 0 ? ql * std::cos(m * ph) * ispi
                                         : ql * std::sin(-m * ph) * ispi;
        }
    }
    for (int n = 0; n < f.ncomp; ++n) {
      double acc = 0;
      const double* c = f.c.data() + std::size_t(n) * nbasis;
      for (int k = 0; k < nbasis; ++k) acc += c[k] * bv[k];
      out[n] = acc;
    }
  }

  int offset(int l) const { return d == 2 ? (l == 0 ? 0 : 2 * l - 1) : l * l; }

 private:
  void check_field(const SphereBasis* fb, const char* who) const {
    if (fb != this) throw std::invalid_argument(std::string(who) + ": basis mismatch");
  }

  SpectralField apply_op(const SpectralField& f, int i,
                         const std::array<std::vector<double>, 3>& op,
                         const char* who) const {
    check_field(f.basis, who);
    if (i < 0 || i >= d) throw std::invalid_argument(std::string(who) + ": axis out of range");
    SpectralField out(*this, f.ncomp);
    const double* M = op[i].data();
    for (int n = 0; n < f.ncomp; ++n) {
      const double* c = f.c.data() + std::size_t(n) * nbasis;
      double* o = out.c.data() + std::size_t(n) * nbasis;
      for (int k = 0; k < nbasis; ++k) {
        double ck = c[k];
        if (ck == 0) continue;
        const double* col = M + std::size_t(k) * nbasis;
        for (int r = 0; r < nbasis; ++r) o[r] += ck * col[r];
      }
    }
    return out;
  }

  // Basis values on the grid for the extended band.
  void fill_basis_table() {
    bval.assign(std::size_t(nbasis_ext) * ngrid, 0.0);
    const double is2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double ispi = 1.0 / std::sqrt(std::numbers::pi);
    if (d == 2) {
      for (int l = 0; l <= lmax + 1; ++l)
        for (int j = 0; j < ngrid; ++j) {
          if (l == 0) {
            bval[j] = is2pi;
          } else {
            bval[std::size_t(offset(l)) * ngrid + j] = std::sin(l * theta[j]) * ispi;
            bval[std::size_t(offset(l) + 1) * ngrid + j] = std::cos(l * theta[j]) * ispi;
          }
        }
      return;
    }
    const int Lx = lmax + 1;
    for (int a = 0; a < ntheta; ++a) {
      auto q = detail::legendre_table(Lx, std::cos(theta[a]), std::sin(theta[a]));
      for (int l = 0; l <= Lx; ++l)
        for (int m = -l; m <= l; ++m) {
          int k = offset(l) + m + l;
          double ql = q[std::size_t(l) * (l + 1) / 2 + std::abs(m)];
          for (int p = 0; p < nphi; ++p) {
            double az = m == 0 ? is2pi
                       : m > 0 ? std::cos(m * phi[p]) * ispi
                               : std::sin(-m * phi[p]) * ispi;
            bval[std::size_t(k) * ngrid + a * nphi + p] = ql * az;
          }
        }
    }
  }

  /// Analyze a grid function into the extended band (internal).
  std::vector<double> analyze_ext(const std::vector<double>& g) const {
    std::vector<double> c(nbasis_ext, 0.0);
    for (int k = 0; k < nbasis_ext; ++k) {
      const double* row = bval.data() + std::size_t(k) * ngrid;
      double acc = 0;
      for (int j = 0; j < ngrid; ++j) acc += weight[j] * g[j] * row[j];
      c[k] = acc;
    }
    return c;
  }

  // D_i on a degree-l harmonic splits as
  //   D_i u = (d + 2l - 2) P_{l-1}(y_i u) - l y_i u,
  // which follows from differentiating the degree-l solid harmonic: the
  // trace decomposition y_i u = [degree l+1 part] + [degree l-1 part]
  // identifies the derivative with (d + 2l - 2) times the lower part.
  // R_i keeps only that lower part scaled by (d + 2l - 2).
  void build_derivatives() {
    for (int i = 0; i < d; ++i) {
      grad[i].assign(std::size_t(nbasis) * ngrid, 0.0);
      dcoef[i].assign(std::size_t(nbasis) * nbasis, 0.0);
      rcoef[i].assign(std::size_t(nbasis) * nbasis, 0.0);
    }
    std::vector<double> prod(ngrid);
    for (int k = 0; k < nbasis; ++k) {
      const int l = deg[k];
      const double* row = bval.data() + std::size_t(k) * ngrid;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < ngrid; ++j) prod[j] = ynode[std::size_t(j) * d + i] * row[j];
        std::vector<double> c = analyze_ext(prod);  // exact: degree l+1 in band
        // ext-band coefficients of D_i phi_k
        std::vector<double> dk(nbasis_ext, 0.0);
        for (int r = 0; r < nbasis_ext; ++r) {
          if (deg[r] == l - 1) {
            dk[r] = (d + 2.0 * l - 2.0) * c[r] - double(l) * c[r];
            rcoef[i][std::size_t(k) * nbasis + r] = (d + 2.0 * l - 2.0) * c[r];
          } else if (deg[r] == l + 1) {
            dk[r] = -double(l) * c[r];
          }
        }
        for (int r = 0; r < nbasis; ++r)
          dcoef[i][std::size_t(k) * nbasis + r] = dk[r];
        // grid values through the ext band, nothing lost
        double* gcol = grad[i].data() + std::size_t(k) * ngrid;
        for (int r = 0; r < nbasis_ext; ++r) {
          if (dk[r] == 0) continue;
          const double* br = bval.data() + std::size_t(r) * ngrid;
          for (int j = 0; j < ngrid; ++j) gcol[j] += dk[r] * br[j];
        }
      }
    }
  }
};

inline SpectralField::SpectralField(const SphereBasis& b, int n)
    : basis(&b), ncomp(n), c(std::size_t(n) * b.nbasis, 0.0) {
  assert(n >= 1);
}

inline double& SpectralField::at(int comp, int l, int m) {
  assert(basis && comp >= 0 && comp < ncomp && l >= 0 && l <= basis->lmax);
  return c[std::size_t(comp) * basis->nbasis + basis->index(l, m)];
}

inline double SpectralField::at(int comp, int l, int m) const {
  assert(basis && comp >= 0 && comp < ncomp && l >= 0 && l <= basis->lmax);
  return c[std::size_t(comp) * basis->nbasis + basis->index(l, m)];
}

inline GridField::GridField(const SphereBasis& b, int n)
    : basis(&b), ncomp(n), v(std::size_t(n) * b.ngrid, 0.0) {
  assert(n >= 1);
}

/// Re-express a field on another basis of the same dimension, copying
/// coefficients per (l, m); degrees beyond the target band are dropped.
inline SpectralField embed(const SpectralField& f, const SphereBasis& target) {
  if (f.basis->d != target.d) throw std::invalid_argument("embed: dimension mismatch");
  SpectralField out(target, f.ncomp);
  int lcap = std::min(f.basis->lmax, target.lmax);
  for (int n = 0; n < f.ncomp; ++n)
    for (int l = 0; l <= lcap; ++l)
      for (int m = 0; m < f.basis->nm(l); ++m) {
        out.c[std::size_t(n) * target.nbasis + target.offset(l) + m] =
            f.c[std::size_t(n) * f.basis->nbasis + f.basis->offset(l) + m];
      }
  return out;
}

}  // namespace exsc
