// nullform.hpp - plane (d = 2) null-condition toolkit: the flat transform
// of a bilinear form acting on cylinder gradients, the null check, and a
// numerical probe of the quadratic decay gain.
//
// A form A acts on pairs of cylinder gradients (time, angle). On the
// frequency-k piece of a linear solution the gradient is proportional to
// zeta(k) = (-|k|, ik); the form kills all resonant self-interactions iff
// its flat transform has zero diagonal, which is what is_null tests.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "norms.hpp"
#include "sphere.hpp"
#include "util.hpp"

namespace exsc {

using Complex = std::complex<double>;
using Mat2 = std::array<Complex, 4>;  // row-major 2x2

/// A 2x2 bilinear form with entries given as Fourier series in the angle:
/// A(theta) = sum_k modes[k + lmax] e^{i k theta}. Constant forms have
/// lmax = 0.
struct BilinearFormField {
  int lmax = 0;
  std::vector<Mat2> modes;  // size 2*lmax + 1

  static BilinearFormField constant(const Mat2& m) {
    BilinearFormField f;
    f.lmax = 0;
    f.modes = {m};
    return f;
  }

  Mat2 at(double theta) const {
    Mat2 out{};
    for (int k = -lmax; k <= lmax; ++k) {
      Complex phase = std::exp(Complex(0, k * theta));
      const Mat2& c = modes[std::size_t(k + lmax)];
      for (int e = 0; e < 4; ++e) out[std::size_t(e)] += c[std::size_t(e)] * phase;
    }
    return out;
  }

  bool finite() const {
    for (const Mat2& m : modes)
      for (const Complex& c : m)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }
};

/// Common constant forms: the dot product, the symplectic form, and the
/// time-time projection used as a negative control.
inline BilinearFormField form_dot() {
  return BilinearFormField::constant({Complex(1), Complex(0), Complex(0), Complex(1)});
}
inline BilinearFormField form_symplectic() {
  return BilinearFormField::constant({Complex(0), Complex(1), Complex(-1), Complex(0)});
}
inline BilinearFormField form_tt() {
  return BilinearFormField::constant({Complex(1), Complex(0), Complex(0), Complex(0)});
}

/// A(a, b) for a constant matrix (bilinear, not sesquilinear).
inline Complex apply_form(const Mat2& m, const std::array<Complex, 2>& a,
                          const std::array<Complex, 2>& b) {
  return a[0] * (m[0] * b[0] + m[1] * b[1]) + a[1] * (m[2] * b[0] + m[3] * b[1]);
}

/// Gradient direction of the frequency-k piece of a decaying linear
/// solution e^{-|k| t + i k theta}: (-|k|, ik).
inline std::array<Complex, 2> zeta(int k) {
  return {Complex(-std::abs(k), 0), Complex(0, k)};
}

/// Conjugation by the frame that diagonalizes resonant interactions:
/// left factor rows are zeta(1), zeta(-1); right factor is its transpose.
inline BilinearFormField flat_transform(const BilinearFormField& a) {
  const Mat2 L = {Complex(-1), Complex(0, 1), Complex(-1), Complex(0, -1)};
  const Mat2 R = {Complex(-1), Complex(-1), Complex(0, 1), Complex(0, -1)};
  BilinearFormField out = a;
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    const Mat2& c = a.modes[i];
    Mat2 lc = {L[0] * c[0] + L[1] * c[2], L[0] * c[1] + L[1] * c[3],
               L[2] * c[0] + L[3] * c[2], L[2] * c[1] + L[3] * c[3]};
    out.modes[i] = {lc[0] * R[0] + lc[1] * R[2], lc[0] * R[1] + lc[1] * R[3],
                    lc[2] * R[0] + lc[3] * R[2], lc[2] * R[1] + lc[3] * R[3]};
  }
  return out;
}

/// True iff both diagonal entries of the flat transform vanish across all
/// Fourier modes. tol < 0 selects the default: 1e-12 for constant forms,
/// 1e-10 for angle-dependent ones.
inline bool is_null(const BilinearFormField& a, double tol = -1) {
  if (tol < 0) tol = a.lmax == 0 ? 1e-12 : 1e-10;
  BilinearFormField flat = flat_transform(a);
  for (const Mat2& m : flat.modes)
    if (std::abs(m[0]) > tol || std::abs(m[3]) > tol) return false;
  return true;
}

struct NullProbeResult {
  LineFit fit;                 // slope of log ||A(grad u, grad v)||_{Y_{s-1,t}}
  std::vector<double> times;
  std::vector<double> lognorms;
};

namespace detail {

/// Angle derivative in coefficient space for a plane basis: sin(l T) gains
/// l cos(l T) and cos(l T) gains -l sin(l T).
inline SpectralField theta_derivative(const SphereBasis& b, const SpectralField& f) {
  SpectralField out(b, f.ncomp);
  for (int n = 0; n < f.ncomp; ++n)
    for (int l = 1; l <= b.lmax; ++l) {
      double cs = f.c[std::size_t(n) * b.nbasis + b.offset(l) + 0];  // sin part
      double cc = f.c[std::size_t(n) * b.nbasis + b.offset(l) + 1];  // cos part
      out.c[std::size_t(n) * b.nbasis + b.offset(l) + 0] = -l * cc;
      out.c[std::size_t(n) * b.nbasis + b.offset(l) + 1] = l * cs;
    }
  return out;
}

}  // namespace detail

/// Builds the decaying linear solutions with data u0, v0, forms the
/// pointwise product A(grad u, grad v) on an oversampled circle at each
/// time node, and fits the slope of the weighted norm's logarithm.
/// Scalar data only; throws if the product is identically negligible.
inline NullProbeResult null_decay_probe(const SpectralField& u0, const SpectralField& v0,
                                        const BilinearFormField& A, double s, double t0 = 0,
                                        double t1 = 6, int nodes = 25) {
  const SphereBasis& b = *u0.basis;
  if (b.d != 2) throw std::invalid_argument("null_decay_probe: plane case only");
  if (v0.basis != &b) throw std::invalid_argument("null_decay_probe: basis mismatch");
  if (u0.ncomp != 1 || v0.ncomp != 1)
    throw std::invalid_argument("null_decay_probe: scalar data only");
  if (!A.finite()) throw std::invalid_argument("null_decay_probe: non-finite form");
  if (t0 < 0 || t1 <= t0 || nodes < 2) throw std::invalid_argument("null_decay_probe: bad range");

  // product band: data band twice, plus the form's own modes
  SphereBasis big = SphereBasis::make(2, 2 * b.lmax + A.lmax, b.oversample);
  std::vector<Mat2> Atheta(std::size_t(big.ngrid));
  for (int gidx = 0; gidx < big.ngrid; ++gidx)
    Atheta[std::size_t(gidx)] = A.at(big.theta[std::size_t(gidx)]);

  NullProbeResult res;
  const double dt = (t1 - t0) / (nodes - 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < nodes; ++n) {
    double t = t0 + n * dt;
    auto flow = [&](const SpectralField& f) {
      SpectralField ft(b, 1);
      for (int k = 0; k < b.nbasis; ++k)
        ft.c[std::size_t(k)] = f.c[std::size_t(k)] * std::exp(-b.lambda(b.deg[k]) * t);
      return ft;
    };
    SpectralField ut = flow(u0), vt = flow(v0);
    SpectralField dut(b, 1), dvt(b, 1);
    for (int k = 0; k < b.nbasis; ++k) {
      dut.c[std::size_t(k)] = -b.lambda(b.deg[k]) * ut.c[std::size_t(k)];
      dvt.c[std::size_t(k)] = -b.lambda(b.deg[k]) * vt.c[std::size_t(k)];
    }
    GridField gu_t = big.synthesize(embed(dut, big));
    GridField gu_a = big.synthesize(embed(detail::theta_derivative(b, ut), big));
    GridField gv_t = big.synthesize(embed(dvt, big));
    GridField gv_a = big.synthesize(embed(detail::theta_derivative(b, vt), big));
    GridField prod(big, 1);
    double factor_scale = 0;
    for (int gidx = 0; gidx < big.ngrid; ++gidx) {
      const Mat2& m = Atheta[std::size_t(gidx)];
      Complex gu0(gu_t.v[std::size_t(gidx)]), gu1(gu_a.v[std::size_t(gidx)]);
      Complex gv0(gv_t.v[std::size_t(gidx)]), gv1(gv_a.v[std::size_t(gidx)]);
      Complex val = apply_form(m, {gu0, gu1}, {gv0, gv1});
      prod.v[std::size_t(gidx)] = val.real();
      double mm = 0;
      for (const Complex& e : m) mm = std::max(mm, std::abs(e));
      factor_scale = std::max(factor_scale, mm * (std::abs(gu0) + std::abs(gu1)) *
                                                (std::abs(gv0) + std::abs(gv1)));
    }
    // Coefficients below the roundoff of the pointwise products are noise;
    // the e^{lambda t} weights would otherwise grow them into a spurious
    // tail on the high shells. Zero them before weighting.
    SpectralField pc = big.analyze(prod);
    const double floor = 1e-13 * factor_scale;
    for (double& c : pc.c)
      if (std::abs(c) < floor) c = 0.0;
    double lw = y_norm_log(pc, s - 1, t);
    res.times.push_back(t);
    res.lognorms.push_back(lw);
    peak = std::max(peak, lw);
  }
  if (!std::isfinite(peak) || peak < std::log(1e-280))
    throw std::runtime_error("null_decay_probe: product is degenerate (zero)");
  std::vector<double> tf, lf;
  for (std::size_t i = 0; i < res.times.size(); ++i)
    if (std::isfinite(res.lognorms[i])) {
      tf.push_back(res.times[i]);
      lf.push_back(res.lognorms[i]);
    }
  res.fit = fit_line(tf, lf);
  return res;
}

}  // namespace exsc
