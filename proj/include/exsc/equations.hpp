// equations.hpp - nonlinearity descriptions f(u, grad u), decay exponent
// bookkeeping, the smallness diagnostic h1, and the equation presets the
// command line exposes by name.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace exsc {

/// One term a * u^p * (grad u)^q. p has one entry per component; q is an
/// ncomp x d row-major exponent table over gradient entries. comp is the
/// output component the term feeds.
struct Monomial {
  int comp = 0;
  std::vector<int> p;
  std::vector<int> q;
  double a = 0;

  int ptotal() const {
    int s = 0;
    for (int e : p) s += e;
    return s;
  }
  int qtotal() const {
    int s = 0;
    for (int e : q) s += e;
    return s;
  }
};

/// A pointwise right-hand side for Delta u = f(u, grad u), with optional
/// monomial metadata driving the exponent bookkeeping. The metadata may be
/// a truncation of a non-polynomial evaluator; metadata_exact says whether
/// it reproduces the evaluator identically.
struct NonlinearitySpec {
  int d = 3;
  int ncomp = 1;
  // eval(u[ncomp], grad[ncomp*d] row-major, out[ncomp])
  std::function<void(const double*, const double*, double*)> eval;
  std::vector<Monomial> monomials;
  bool metadata_exact = false;
  bool scalar_product_structure = false;  // gradients enter via dot products only
  bool bracket_structure_2d = false;      // d = 2 Poisson-bracket structure
  bool null_condition_2d = false;         // d = 2 null condition holds
  double chart_radius = std::numeric_limits<double>::infinity();

  /// Direct evaluation of the monomial list (metadata consistency checks).
  void eval_from_metadata(const double* u, const double* grad, double* out) const {
    for (int i = 0; i < ncomp; ++i) out[i] = 0;
    for (const Monomial& m : monomials) {
      double term = m.a;
      for (std::size_t j = 0; j < m.p.size(); ++j)
        for (int e = 0; e < m.p[j]; ++e) term *= u[j];
      for (std::size_t j = 0; j < m.q.size(); ++j)
        for (int e = 0; e < m.q[j]; ++e) term *= grad[j];
      out[m.comp] += term;
    }
  }
};

/// Generic decay exponent: min over monomials of (d-2)(|p|+|q|) - d.
inline double nu_exponent(const NonlinearitySpec& spec) {
  if (spec.monomials.empty()) throw std::invalid_argument("nu_exponent: no metadata");
  double best = std::numeric_limits<double>::infinity();
  for (const Monomial& m : spec.monomials) {
    if (m.a == 0) continue;
    best = std::min(best, double((spec.d - 2) * (m.ptotal() + m.qtotal()) - spec.d));
  }
  return best;
}

/// Exponent under dot-product or bracket structure:
/// min of (d-2)|p| + (d-1)|q| - d.
inline double nu_exponent_structured(const NonlinearitySpec& spec) {
  if (spec.monomials.empty())
    throw std::invalid_argument("nu_exponent_structured: no metadata");
  if (!spec.scalar_product_structure && !spec.bracket_structure_2d)
    throw std::invalid_argument("nu_exponent_structured: no structure flag");
  double best = std::numeric_limits<double>::infinity();
  for (const Monomial& m : spec.monomials) {
    if (m.a == 0) continue;
    best = std::min(best,
                    double((spec.d - 2) * m.ptotal() + (spec.d - 1) * m.qtotal() - spec.d));
  }
  return best;
}

namespace detail {

/// Enumerate the distinct cylinder-monomial signatures produced by one
/// physical monomial's gradient factors. Each unit gradient factorturns
/// into one of three cylinder terms (value, time-derivative, tangential),
/// and the value/time ones each carry a direction factor. The callback
/// receives (alpha_total, signature key) per distinct signature.
inline void gradient_signatures(const std::vector<int>& q, int ncomp, int d,
                                const std::vector<int>& p,
                                std::set<std::vector<int>>& out) {
  struct Entry {
    int j, l, pow;
  };
  std::vector<Entry> entries;
  for (int j = 0; j < ncomp; ++j)
    for (int l = 0; l < d; ++l) {
      int pw = (std::size_t(j) * d + l < q.size()) ? q[std::size_t(j) * d + l] : 0;
      if (pw > 0) entries.push_back({j, l, pw});
    }
  // state: alpha[d], iota[ncomp], gamma[ncomp], delta[ncomp*d], beta = p + iota
  std::vector<int> alpha(d, 0), iota(ncomp, 0), gamma(ncomp, 0), delta(ncomp * d, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t e) {
    if (e == entries.size()) {
      std::vector<int> key;
      key.reserve(alpha.size() + 2 * iota.size() + delta.size() + p.size());
      for (int x : alpha) key.push_back(x);
      for (std::size_t j = 0; j < std::size_t(ncomp); ++j)
        key.push_back(int(j < p.size() ? p[j] : 0) + iota[j]);  // beta
      for (int x : iota) key.push_back(x);
      for (int x : gamma) key.push_back(x);
      for (int x : delta) key.push_back(x);
      out.insert(std::move(key));
      return;
    }
    const Entry& en = entries[e];
    for (int mv = 0; mv <= en.pow; ++mv)
      for (int mw = 0; mw + mv <= en.pow; ++mw) {
        int mz = en.pow - mv - mw;
        alpha[en.l] += mv + mw;
        iota[en.j] += mv;
        gamma[en.j] += mw;
        delta[std::size_t(en.j) * d + en.l] += mz;
        rec(e + 1);
        alpha[en.l] -= mv + mw;
        iota[en.j] -= mv;
        gamma[en.j] -= mw;
        delta[std::size_t(en.j) * d + en.l] -= mz;
      }
  };
  rec(0);
}

}  // namespace detail

/// Partial sum of the smallness series h1 at radius sigma, over the
/// monomials present in the metadata. Per physical monomial (p, q) the
/// cylinder expansion is enumerated exactly: each distinct signature
/// (alpha, beta, gamma, delta, iota) contributes
///   (d/2+1)^{|q|} * amax * <|alpha|>^{s+1} * (|beta|+|gamma|+|delta|)
///   * sigma^{|beta|+|gamma|+|delta|-1},
/// where amax maximizes |a| over output components with the same (p, q)
/// and |beta|+|gamma|+|delta| = |p|+|q|. A diagnostic, not a certificate:
/// the analytic absolute constants are unknown.
inline double h1_partial(const NonlinearitySpec& spec, double s, double sigma) {
  if (spec.monomials.empty()) throw std::invalid_argument("h1_partial: no metadata");
  const int d = spec.d, N = spec.ncomp;
  // group by (p, q), accumulating a per component, then take max |a|
  std::map<std::vector<int>, std::map<int, double>> groups;
  for (const Monomial& m : spec.monomials) {
    std::vector<int> key(std::size_t(N) + std::size_t(N) * d, 0);
    for (std::size_t j = 0; j < m.p.size() && j < std::size_t(N); ++j) key[j] = m.p[j];
    for (std::size_t j = 0; j < m.q.size() && j < std::size_t(N) * d; ++j)
      key[std::size_t(N) + j] = m.q[j];
    groups[std::move(key)][m.comp] += m.a;
  }
  double total = 0;
  for (const auto& [key, per_comp] : groups) {
    double amax = 0;
    for (const auto& [comp, a] : per_comp) amax = std::max(amax, std::abs(a));
    if (amax == 0) continue;
    std::vector<int> p(key.begin(), key.begin() + N);
    std::vector<int> q(key.begin() + N, key.end());
    int ptot = 0, qtot = 0;
    for (int e : p) ptot += e;
    for (int e : q) qtot += e;
    int degree = ptot + qtot;
    if (degree == 0) continue;
    std::set<std::vector<int>> signatures;
    detail::gradient_signatures(q, N, d, p, signatures);
    double weight = std::pow(d / 2.0 + 1.0, qtot) * amax * degree *
                    (degree == 1 ? 1.0 : std::pow(sigma, degree - 1));
    for (const auto& sig : signatures) {
      int atot = 0;
      for (int l = 0; l < d; ++l) atot += sig[l];
      total += weight * std::pow(std::sqrt(1.0 + double(atot) * atot), s + 1);
    }
  }
  return total;
}

/// A named equation with its predicted rates and chart data.
struct EquationPreset {
  std::string name;
  NonlinearitySpec spec;
  double nu1 = std::numeric_limits<double>::quiet_NaN();
  double nu1_structured = std::numeric_limits<double>::quiet_NaN();
  double refined_rate = std::numeric_limits<double>::quiet_NaN();
  // decay rate the scattering experiments are compared against; equals the
  // governing exponent except for plane null-structure systems, where the
  // bilinear gain lifts it to 2
  double predicted_decay = std::numeric_limits<double>::quiet_NaN();
  bool borderline = false;  // governing exponent exactly zero
  std::vector<std::string> modes;
  // target-manifold chart (empty functions for flat targets):
  // psi maps chart coordinates to the ambient embedding, dpsi(x, i) is the
  // i-th coordinate derivative
  std::function<std::vector<double>(const std::vector<double>&)> chart_psi;
  std::function<std::vector<double>(const std::vector<double>&, int)> chart_dpsi;
};

namespace detail {
inline std::vector<std::string> all_modes() {
  return {"scatter", "scatter_refined", "dirichlet", "zero_scatter", "zero_dirichlet"};
}
}  // namespace detail

/// Delta u = kappa * u^p, scalar.
inline EquationPreset semilinear_power(int d, int p, double kappa) {
  if (p < 2) throw std::invalid_argument("semilinear_power: need p >= 2");
  EquationPreset eq;
  eq.name = "semilinear";
  eq.spec.d = d;
  eq.spec.ncomp = 1;
  eq.spec.eval = [p, kappa](const double* u, const double*, double* out) {
    double t = kappa;
    for (int e = 0; e < p; ++e) t *= u[0];
    out[0] = t;
  };
  Monomial m;
  m.comp = 0;
  m.p = {p};
  m.q = {};
  m.a = kappa;
  eq.spec.monomials = {m};
  eq.spec.metadata_exact = true;
  eq.spec.scalar_product_structure = true;  // no gradients at all
  eq.nu1 = nu_exponent(eq.spec);
  eq.nu1_structured = nu_exponent_structured(eq.spec);
  eq.refined_rate = 2 * eq.nu1;
  eq.predicted_decay = eq.nu1;
  eq.borderline = eq.nu1 == 0;
  eq.modes = detail::all_modes();
  return eq;
}

/// The radial profile W_lambda(x) = lambda^{1/2} (1 + lambda^2|x|^2/3)^{-1/2}
/// in dimension 3, which solves Delta u = -u^5.
inline double ground_state_W(double lambda, double r) {
  if (lambda <= 0) throw std::invalid_argument("ground_state_W: lambda <= 0");
  double lr = lambda * r;
  return std::sqrt(lambda) / std::sqrt(1.0 + lr * lr / 3.0);
}

namespace detail {

/// Truncated monomial expansion of the sphere-chart harmonic map
/// nonlinearity f_i = -u_i (sum_j |w_j|^2 + |sum_j u_j w_j|^2 / (1-|u|^2)),
/// through first order in the geometric series for 1/(1-|u|^2).
inline std::vector<Monomial> harmonic_map_monomials(int N, int d) {
  std::vector<Monomial> out;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < d; ++l) {
        Monomial m;
        m.comp = i;
        m.p.assign(N, 0);
        m.p[i] += 1;
        m.q.assign(std::size_t(N) * d, 0);
        m.q[std::size_t(j) * d + l] = 2;
        m.a = -1;
        out.push_back(m);
      }
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < d; ++l) {
          Monomial m;
          m.comp = i;
          m.p.assign(N, 0);
          m.p[i] += 1;
          m.p[j] += 1;
          m.p[k] += 1;
          m.q.assign(std::size_t(N) * d, 0);
          m.q[std::size_t(j) * d + l] += 1;
          m.q[std::size_t(k) * d + l] += 1;
          m.a = -1;
          out.push_back(m);
          for (int rr = 0; rr < N; ++rr) {
            Monomial m2 = m;
            m2.p[rr] += 2;
            out.push_back(m2);
          }
        }
  }
  return out;
}

}  // namespace detail

/// Harmonic maps into the round sphere S^target_dim, written in the graph
/// chart psi(x) = (x, sqrt(1-|x|^2)) around the pole. The metric there is
/// g_jk = delta_jk + u_j u_k / (1 - |u|^2) and the Christoffel contraction
/// collapses to f_i = -u_i * sum_jk g_jk(u) w_j . w_k.
inline EquationPreset harmonic_map_sphere_chart(int d, int target_dim = 2) {
  if (target_dim < 1) throw std::invalid_argument("harmonic_map_sphere_chart: bad target");
  const int N = target_dim;
  const double guard = 0.4;
  EquationPreset eq;
  eq.name = "harmonic_map";
  eq.spec.d = d;
  eq.spec.ncomp = N;
  eq.spec.chart_radius = guard;
  eq.spec.eval = [N, d, guard](const double* u, const double* grad, double* out) {
    double rho = 0;
    for (int i = 0; i < N; ++i) rho += u[i] * u[i];
    if (rho > guard * guard)
      throw std::domain_error("harmonic_map: state left the chart (|u| > " +
                              std::to_string(guard) + ")");
    double s1 = 0;
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < d; ++l) s1 += grad[std::size_t(j) * d + l] * grad[std::size_t(j) * d + l];
    double s2 = 0;
    for (int l = 0; l < d; ++l) {
      double tl = 0;
      for (int j = 0; j < N; ++j) tl += u[j] * grad[std::size_t(j) * d + l];
      s2 += tl * tl;
    }
    double factor = s1 + s2 / (1.0 - rho);
    for (int i = 0; i < N; ++i) out[i] = -u[i] * factor;
  };
  eq.spec.monomials = detail::harmonic_map_monomials(N, d);
  eq.spec.metadata_exact = false;
  eq.spec.scalar_product_structure = true;
  eq.spec.null_condition_2d = (d == 2);
  eq.nu1 = nu_exponent(eq.spec);
  eq.nu1_structured = nu_exponent_structured(eq.spec);
  eq.predicted_decay = d == 2 ? 2.0 : eq.nu1_structured;
  eq.refined_rate = 2 * eq.predicted_decay;
  eq.borderline = eq.nu1_structured == 0;
  eq.modes = detail::all_modes();
  eq.chart_psi = [N](const std::vector<double>& x) {
    double rho = 0;
    for (double xi : x) rho += xi * xi;
    if (rho >= 1) throw std::domain_error("chart_psi: |x| >= 1");
    std::vector<double> out(x.begin(), x.end());
    out.push_back(std::sqrt(1.0 - rho));
    return out;
  };
  eq.chart_dpsi = [N](const std::vector<double>& x, int i) {
    double rho = 0;
    for (double xi : x) rho += xi * xi;
    if (rho >= 1) throw std::domain_error("chart_dpsi: |x| >= 1");
    std::vector<double> out(std::size_t(N) + 1, 0.0);
    out[std::size_t(i)] = 1.0;
    out[std::size_t(N)] = -x[std::size_t(i)] / std::sqrt(1.0 - rho);
    return out;
  };
  return eq;
}

/// Prescribed-curvature system on the plane: the sphere-chart harmonic
/// part plus the antisymmetric bracket coupling
///   -1/2 sum_jl H[i][j][l] (w_j,x w_l,y - w_j,y w_l,x).
/// H is a constant 2x2x2 tensor, row-major [i][j][l], antisymmetric in
/// (j, l).
inline EquationPreset h_system_2d(const std::vector<double>& H) {
  if (H.size() != 8) throw std::invalid_argument("h_system_2d: need 8 tensor entries");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l)
        if (H[std::size_t(i) * 4 + j * 2 + l] != -H[std::size_t(i) * 4 + l * 2 + j])
          throw std::invalid_argument("h_system_2d: tensor not antisymmetric in (j,l)");
  const int d = 2, N = 2;
  EquationPreset eq = harmonic_map_sphere_chart(d, N);
  eq.name = "h_system";
  auto harm = eq.spec.eval;
  std::vector<double> Ht = H;
  eq.spec.eval = [harm, Ht](const double* u, const double* grad, double* out) {
    harm(u, grad, out);
    for (int i = 0; i < N; ++i) {
      double add = 0;
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
          add += Ht[std::size_t(i) * 4 + j * 2 + l] *
                 (grad[std::size_t(j) * 2 + 0] * grad[std::size_t(l) * 2 + 1] -
                  grad[std::size_t(j) * 2 + 1] * grad[std::size_t(l) * 2 + 0]);
      out[i] -= 0.5 * add;
    }
  };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) {
        double h = H[std::size_t(i) * 4 + j * 2 + l];
        if (h == 0) continue;
        Monomial m1;
        m1.comp = i;
        m1.p.assign(N, 0);
        m1.q.assign(std::size_t(N) * d, 0);
        m1.q[std::size_t(j) * d + 0] += 1;
        m1.q[std::size_t(l) * d + 1] += 1;
        m1.a = -0.5 * h;
        eq.spec.monomials.push_back(m1);
        Monomial m2;
        m2.comp = i;
        m2.p.assign(N, 0);
        m2.q.assign(std::size_t(N) * d, 0);
        m2.q[std::size_t(j) * d + 1] += 1;
        m2.q[std::size_t(l) * d + 0] += 1;
        m2.a = 0.5 * h;
        eq.spec.monomials.push_back(m2);
      }
  eq.spec.bracket_structure_2d = true;
  eq.spec.null_condition_2d = true;
  eq.nu1 = nu_exponent(eq.spec);
  eq.nu1_structured = nu_exponent_structured(eq.spec);
  eq.predicted_decay = 2.0;
  eq.refined_rate = 2 * eq.predicted_decay;
  eq.borderline = eq.nu1_structured == 0;
  return eq;
}

/// Convenience constant-coefficient variant: H[i][1][2] = h_i.
inline EquationPreset h_system_2d(double h1, double h2) {
  std::vector<double> H(8, 0.0);
  H[0 * 4 + 0 * 2 + 1] = h1;
  H[0 * 4 + 1 * 2 + 0] = -h1;
  H[1 * 4 + 0 * 2 + 1] = h2;
  H[1 * 4 + 1 * 2 + 0] = -h2;
  return h_system_2d(H);
}

/// Registry used by the command line. Recognized names: "semilinear"
/// (keys p, kappa), "harmonic_map" (key target_dim), "h_system"
/// (keys H1, H2).
inline EquationPreset equation_preset(const std::string& name, int d,
                                      const std::unordered_map<std::string, double>& opts = {}) {
  auto get = [&opts](const std::string& key, double fallback) {
    auto it = opts.find(key);
    return it == opts.end() ? fallback : it->second;
  };
  if (name == "semilinear")
    return semilinear_power(d, int(get("p", 5)), get("kappa", 1.0));
  if (name == "harmonic_map") return harmonic_map_sphere_chart(d, int(get("target_dim", 2)));
  if (name == "h_system") {
    if (d != 2) throw std::invalid_argument("h_system: d must be 2");
    return h_system_2d(get("H1", 1.0), get("H2", 1.0));
  }
  throw std::invalid_argument("unknown equation preset: " + name);
}

}  // namespace exsc
