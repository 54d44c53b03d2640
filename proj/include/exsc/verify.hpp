// verify.hpp - structural self-checks of the transform, derivative,
// norm, conformal and polynomial-splitting layers. Each check returns a
// measured value against a pinned threshold, so the suite doubles as a
// regression net and as the `verify` CLI payload.
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "conformal.hpp"
#include "fischer.hpp"
#include "norms.hpp"
#include "sphere.hpp"
#include "util.hpp"

namespace exsc {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0;      // measured quantity (usually an error or a ratio)
  double threshold = 0;  // pass boundary the value was held against
  std::string detail;
};

namespace detail {

inline SpectralField random_field(const SphereBasis& b, Rng& rng, double amp = 1.0,
                                  int ncomp = 1) {
  SpectralField f(b, ncomp);
  for (double& c : f.c) c = rng.sym(amp);
  return f;
}

inline double shell_resid_outside(const SphereBasis& b, const SpectralField& f, int lo,
                                  int hi) {
  double worst = 0;
  for (int l = 0; l <= b.lmax; ++l) {
    if (l >= lo && l <= hi) continue;
    for (int m = 0; m < b.nm(l); ++m)
      worst = std::max(worst, std::abs(f.c[std::size_t(b.offset(l)) + m]));
  }
  return worst;
}

}  // namespace detail

/// Full structural suite at one (d, lmax, s). Deterministic in the seed.
inline std::vector<CheckResult> verify_structural(int d, int lmax, double s,
                                                  std::uint64_t seed = 1) {
  std::vector<CheckResult> out;
  auto push = [&out](const std::string& name, double value, double threshold,
                     const std::string& detail = "") {
    out.push_back({name, value <= threshold, value, threshold, detail});
  };
  SphereBasis basis = SphereBasis::make(d, lmax, 4);
  Rng rng(seed);

  {  // transform round trip on random coefficients
    SpectralField f = detail::random_field(basis, rng);
    SpectralField g = basis.analyze(basis.synthesize(f));
    double err = 0;
    for (std::size_t i = 0; i < f.c.size(); ++i) err = std::max(err, std::abs(f.c[i] - g.c[i]));
    push("transform_round_trip", err, 1e-12);
  }

  {  // products of single harmonics live on [|l1-l2|, l1+l2]
    double worst = 0;
    for (int l1 = 0; l1 <= lmax; ++l1)
      for (int l2 = 0; l2 + l1 <= lmax; ++l2) {
        SpectralField a(basis, 1), b(basis, 1);
        a.c[std::size_t(basis.offset(l1))] = 1.0;
        b.c[std::size_t(basis.offset(l2)) + basis.nm(l2) - 1] = 1.0;
        SpectralField p = basis.multiply(a, b);
        worst = std::max(worst, detail::shell_resid_outside(basis, p, std::abs(l1 - l2), l1 + l2));
      }
    push("product_support", worst, 1e-12);
  }

  if (lmax >= 2) {  // coordinate products match the direct expansions
    double worst = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        std::vector<int> ei(d, 0), ej(d, 0), eij(d, 0);
        ei[i] = 1;
        ej[j] = 1;
        eij[i] += 1;
        eij[j] += 1;
        SpectralField prod = basis.multiply(basis.poly_to_sh(ei), basis.poly_to_sh(ej));
        SpectralField ref = basis.poly_to_sh(eij);
        for (std::size_t k = 0; k < prod.c.size(); ++k)
          worst = std::max(worst, std::abs(prod.c[k] - ref.c[k]));
      }
    push("product_polynomial_exact", worst, 1e-12);
  }

  {  // R_i sends shell l into shell l-1, nothing else
    double worst = 0;
    for (int l = 0; l <= lmax; ++l) {
      SpectralField f(basis, 1);
      for (int m = 0; m < basis.nm(l); ++m) f.c[std::size_t(basis.offset(l)) + m] = rng.sym(1.0);
      for (int i = 0; i < d; ++i)
        worst = std::max(worst,
                         detail::shell_resid_outside(basis, basis.apply_Ri(f, i), l - 1, l - 1));
    }
    push("lowering_shift_exact", worst, 1e-12);
  }

  {  // D_i sends shell l into shells l-1 and l+1 only (band interior)
    double worst = 0;
    for (int l = 0; l + 1 <= lmax; ++l) {
      SpectralField f(basis, 1);
      for (int m = 0; m < basis.nm(l); ++m) f.c[std::size_t(basis.offset(l)) + m] = rng.sym(1.0);
      for (int i = 0; i < d; ++i)
        worst = std::max(worst,
                         detail::shell_resid_outside(basis, basis.apply_Di(f, i), l - 1, l + 1));
    }
    push("tangential_shift_support", worst, 1e-12);
  }

  {  // tangential gradients are pointwise orthogonal to the position
    SpectralField f = detail::random_field(basis, rng);
    std::vector<std::vector<double>> di(std::size_t(d), std::vector<double>(basis.ngrid));
    for (int i = 0; i < d; ++i) basis.apply_Di_grid(f, i, 0, di[std::size_t(i)].data());
    double worst = 0;
    for (int j = 0; j < basis.ngrid; ++j) {
      double dot = 0;
      for (int i = 0; i < d; ++i) dot += basis.ynode[std::size_t(j) * d + i] * di[std::size_t(i)][j];
      worst = std::max(worst, std::abs(dot));
    }
    push("gradient_tangency", worst, 1e-11);
  }

  {  // sum_i D_i D_i acts as -l(l+d-2) on each interior shell
    double worst = 0;
    for (int l = 0; l + 1 <= lmax; ++l) {
      SpectralField f(basis, 1);
      double nrm = 0;
      for (int m = 0; m < basis.nm(l); ++m) {
        double c = rng.sym(1.0);
        f.c[std::size_t(basis.offset(l)) + m] = c;
        nrm += c * c;
      }
      nrm = std::sqrt(nrm);
      SpectralField lap(basis, 1);
      for (int i = 0; i < d; ++i) {
        SpectralField dd = basis.apply_Di(basis.apply_Di(f, i), i);
        for (std::size_t k = 0; k < lap.c.size(); ++k) lap.c[k] += dd.c[k];
      }
      double eig = -double(l) * (l + d - 2);
      double err = 0;
      for (int m = 0; m < basis.nm(l); ++m) {
        std::size_t k = std::size_t(basis.offset(l)) + m;
        err = std::max(err, std::abs(lap.c[k] - eig * f.c[k]));
      }
      worst = std::max(worst, err / std::max(1.0, std::abs(eig) * nrm));
    }
    push("beltrami_contraction", worst, 1e-10);
  }

  {  // weighted norms grow with the time weight and with s
    SpectralField f = detail::random_field(basis, rng);
    double worst = 0;
    double prev = y_norm_log(f, s, 0.0);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      double cur = y_norm_log(f, s, t);
      worst = std::max(worst, prev - cur);
      prev = cur;
    }
    worst = std::max(worst, y_norm_log(f, s, 1.0) - y_norm_log(f, s + 0.5, 1.0));
    push("norm_monotonicity", worst, 1e-13);
  }

  {  // pointwise products obey the smooth-index algebra bound
    double worst = 0;
    for (int trial = 0; trial < 8; ++trial) {
      SpectralField f = detail::random_field(basis, rng), g = detail::random_field(basis, rng);
      double num = hs_norm(basis.multiply(f, g), s);
      double den = hs_norm(f, s) * hs_norm(g, s);
      if (den > 0) worst = std::max(worst, num / den);
    }
    push("product_norm_bound", worst, 8.0);
  }

  {  // zonal sup/L2 growth stays at the predicted power, and reaches it
    double powworst = 0, sat = 0;
    for (int l = 0; l <= lmax; ++l) {
      double ratio = basis.sogge_ratio(l) / std::pow(1.0 + l, 0.5 * (d - 2));
      powworst = std::max(powworst, ratio);
      if (l == lmax) sat = ratio;
    }
    push("zonal_growth_bounded", powworst, 0.62);
    if (d == 3)
      push("zonal_growth_attained", sat >= 0.3 ? 0.0 : 1.0, 0.5,
           "ratio at lmax = " + std::to_string(sat));
  }

  for (Orientation o : {Orientation::infinity_, Orientation::zero}) {
    // mode-wise harmonic extension against the cylinder linear flow, and
    // scale invariance of the matched-radius norm on that extension
    SpectralField u0 = detail::random_field(basis, rng);
    double werr = 0, zvar = 0, zref = 0;
    bool first = true;
    for (double step : {0.0, 0.7, 1.9, 3.1}) {
      double r = o == Orientation::infinity_ ? std::exp(step) : std::exp(-step);
      SpectralField ext = harmonic_extension(u0, o, r);
      auto [vf, wf] = linear_flow(u0, step, 0.0);
      double w = std::exp((o == Orientation::infinity_ ? 0.5 : -0.5) * (d - 2) * step);
      for (int k = 0; k < basis.nbasis; ++k) {
        double cyl = vf.c[std::size_t(k)] / w;  // back to the physical trace
        werr = std::max(werr, std::abs(cyl - ext.c[std::size_t(k)]));
      }
      double z = z_norm_log(ext, s, r, o);
      if (first) {
        zref = z;
        first = false;
      } else {
        zvar = std::max(zvar, std::abs(z - zref));
      }
    }
    std::string tag = o == Orientation::infinity_ ? "exterior" : "interior";
    push("conformal_flow_consistency_" + tag, werr, 1e-10);
    push("matched_norm_scale_invariance_" + tag, zvar, 1e-10);
  }

  {  // exact harmonic/remainder splitting through degree 8
    double bad = 0;
    Polynomial f;
    f.d = d;
    auto E = [d](int a, int b, int c) {
      return std::array<int, 3>{a, d > 1 ? b : 0, d > 2 ? c : 0};
    };
    f.add(E(8, 0, 0), Rational(3));
    f.add(E(2, 4, 2), Rational(-2));
    f.add(E(1, 2, 3), Rational(5));
    f.add(E(3, 1, 0), Rational(1));
    f.add(E(0, 0, 0), Rational(-7));
    FischerSplit fs = fischer_decompose(f);
    Polynomial lh = laplacian(fs.harmonic);
    if (!lh.zero()) bad = 1;
    Polynomial rec = fs.harmonic;
    Polynomial r2q = radius_squared_times(fs.quotient);
    for (const auto& [e, c] : r2q.terms) rec.add(e, c);
    for (const auto& [e, c] : f.terms) rec.add(e, -c);
    if (!rec.zero()) bad = 1;
    push("harmonic_split_exact_deg8", bad, 0.0);
  }

  return out;
}

}  // namespace exsc
