// Equation presets: evaluators against independent arithmetic, exponent
// bookkeeping against hand-computed values, chart data against the
// extrinsic harmonic-map equation, and the smallness diagnostic against a
// closed-form enumeration.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "exsc/equations.hpp"
#include "exsc/util.hpp"

using namespace exsc;

TEST_CASE("ground state profile satisfies its radial equation") {
  // u'' + (2/r) u' + u^5 = 0 in d = 3, checked by centered differences;
  // the step scales with r to keep subtractive cancellation below the
  // truncation term where the profile is nearly harmonic
  for (double lambda : {1.0, 100.0}) {
    for (double r : {0.3, 1.0, 3.0, 17.0}) {
      const double h = 1e-4 * r;
      double wm = ground_state_W(lambda, r - h);
      double w0 = ground_state_W(lambda, r);
      double wp = ground_state_W(lambda, r + h);
      double d2 = (wm - 2 * w0 + wp) / (h * h);
      double d1 = (wp - wm) / (2 * h);
      double w5 = std::pow(w0, 5);
      double scale = std::max({std::abs(d2), std::abs(2 * d1 / r), w5});
      REQUIRE(std::abs(d2 + 2 * d1 / r + w5) < 1e-6 * scale);
    }
  }
  REQUIRE(ground_state_W(4.0, 0.0) == Catch::Approx(2.0));
  REQUIRE_THROWS_AS(ground_state_W(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("power nonlinearity exponents match the degree formula") {
  // nu_1 = (d-2) p - d for a pure power
  REQUIRE(semilinear_power(3, 5, 1.0).nu1 == 2.0);
  REQUIRE(semilinear_power(3, 7, 1.0).nu1 == 4.0);
  REQUIRE(semilinear_power(4, 3, 1.0).nu1 == 2.0);
  REQUIRE(semilinear_power(3, 2, 1.0).nu1 == -1.0);
  REQUIRE(semilinear_power(2, 5, 1.0).nu1 == -2.0);
  REQUIRE(semilinear_power(2, 3, -1.0).nu1 == -2.0);
  EquationPreset eq = semilinear_power(3, 5, -1.0);
  REQUIRE(eq.nu1_structured == 2.0);  // no gradients, both formulas agree
  REQUIRE(eq.predicted_decay == 2.0);
  REQUIRE(eq.refined_rate == 4.0);
  REQUIRE_FALSE(eq.borderline);
  REQUIRE(eq.spec.metadata_exact);
  REQUIRE_THROWS_AS(semilinear_power(3, 1, 1.0), std::invalid_argument);
}

TEST_CASE("exponent bookkeeping ignores cancelled monomials and wants flags") {
  NonlinearitySpec spec;
  spec.d = 3;
  spec.ncomp = 1;
  Monomial dead;
  dead.p = {2};
  dead.a = 0.0;  // would give nu1 = -1 if counted
  Monomial live;
  live.p = {5};
  live.a = 0.5;
  spec.monomials = {dead, live};
  REQUIRE(nu_exponent(spec) == 2.0);
  REQUIRE_THROWS_AS(nu_exponent_structured(spec), std::invalid_argument);  // no flags
  spec.scalar_product_structure = true;
  REQUIRE(nu_exponent_structured(spec) == 2.0);
  spec.monomials.clear();
  REQUIRE_THROWS_AS(nu_exponent(spec), std::invalid_argument);
}

TEST_CASE("semilinear metadata reproduces the evaluator") {
  Rng rng(7);
  for (auto [d, p] : {std::pair{3, 5}, {3, 2}, {4, 3}, {2, 6}}) {
    EquationPreset eq = semilinear_power(d, p, 1.7);
    for (int trial = 0; trial < 16; ++trial) {
      double u = rng.sym(0.9);
      std::vector<double> grad(std::size_t(d), 0.0);
      for (double& g : grad) g = rng.sym(1.0);
      double a = 0, b = 0;
      eq.spec.eval(&u, grad.data(), &a);
      eq.spec.eval_from_metadata(&u, grad.data(), &b);
      REQUIRE(a == Catch::Approx(b).margin(1e-15).epsilon(1e-14));
    }
  }
}

TEST_CASE("sphere chart is centered at the pole with orthonormal frame") {
  EquationPreset eq = harmonic_map_sphere_chart(3, 2);
  std::vector<double> pole = eq.chart_psi({0.0, 0.0});
  REQUIRE(pole.size() == 3);
  REQUIRE(pole[0] == 0.0);
  REQUIRE(pole[1] == 0.0);
  REQUIRE(pole[2] == Catch::Approx(1.0));
  for (int i = 0; i < 2; ++i) {
    std::vector<double> e = eq.chart_dpsi({0.0, 0.0}, i);
    for (int a = 0; a < 3; ++a) REQUIRE(e[std::size_t(a)] == (a == i ? 1.0 : 0.0));
  }
  // the embedding stays on the unit sphere across the chart
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> x = {rng.sym(0.5), rng.sym(0.5)};
    if (x[0] * x[0] + x[1] * x[1] >= 1) continue;
    std::vector<double> ps = eq.chart_psi(x);
    double n2 = 0;
    for (double c : ps) n2 += c * c;
    REQUIRE(n2 == Catch::Approx(1.0).epsilon(1e-13));
  }
  REQUIRE_THROWS_AS(eq.chart_psi({0.8, 0.7}), std::domain_error);
}

TEST_CASE("chart nonlinearity closes the extrinsic harmonic map equation") {
  // If Delta u = f(u, grad u) componentwise, U = psi(u) must satisfy
  // Delta U = -|grad U|^2 U. Pointwise that pins f against the chart:
  //   sum_i dpsi_a/dx_i f_i + sum_ij Hess_a(i,j) grad_u_i . grad_u_j
  //     = -psi_a(u) |grad U|^2.
  // The Hessian of the graph chart is analytic: zero for a < N, and
  //   -delta_ij / s - x_i x_j / s^3   (s = sqrt(1 - |x|^2))  for a = N.
  const int N = 2, d = 3;
  EquationPreset eq = harmonic_map_sphere_chart(d, N);
  Rng rng(23);
  double worst = 0;
  for (int trial = 0; trial < 32; ++trial) {
    std::vector<double> u = {rng.sym(0.27), rng.sym(0.27)};
    double rho = u[0] * u[0] + u[1] * u[1];
    std::vector<double> grad(std::size_t(N) * d);
    for (double& g : grad) g = rng.sym(1.2);
    std::vector<double> f(N);
    eq.spec.eval(u.data(), grad.data(), f.data());

    double s = std::sqrt(1.0 - rho);
    std::vector<double> psi = eq.chart_psi(u);
    // grad U_a = sum_i dpsi_a/dx_i grad u_i, then |grad U|^2
    double gU2 = 0;
    std::vector<std::vector<double>> dpsi(N);
    for (int i = 0; i < N; ++i) dpsi[std::size_t(i)] = eq.chart_dpsi(u, i);
    for (int a = 0; a <= N; ++a)
      for (int l = 0; l < d; ++l) {
        double ga = 0;
        for (int i = 0; i < N; ++i)
          ga += dpsi[std::size_t(i)][std::size_t(a)] * grad[std::size_t(i) * d + l];
        gU2 += ga * ga;
      }
    for (int a = 0; a <= N; ++a) {
      double lhs = 0;
      for (int i = 0; i < N; ++i) lhs += dpsi[std::size_t(i)][std::size_t(a)] * f[std::size_t(i)];
      if (a == N) {
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) {
            double hess = -(i == j ? 1.0 / s : 0.0) - u[std::size_t(i)] * u[std::size_t(j)] / (s * s * s);
            double dot = 0;
            for (int l = 0; l < d; ++l) dot += grad[std::size_t(i) * d + l] * grad[std::size_t(j) * d + l];
            lhs += hess * dot;
          }
      }
      double rhs = -psi[std::size_t(a)] * gU2;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  REQUIRE(worst < 1e-10);
}

TEST_CASE("chart evaluator vanishes at the pole and guards the boundary") {
  EquationPreset eq = harmonic_map_sphere_chart(2, 2);
  std::vector<double> u = {0.0, 0.0}, grad = {0.3, -0.7, 1.1, 0.2}, out(2);
  eq.spec.eval(u.data(), grad.data(), out.data());
  REQUIRE(out[0] == 0.0);
  REQUIRE(out[1] == 0.0);
  u = {0.38, 0.2};  // |u| beyond the chart guard 0.4
  REQUIRE_THROWS_AS(eq.spec.eval(u.data(), grad.data(), out.data()), std::domain_error);
  REQUIRE(eq.spec.chart_radius == Catch::Approx(0.4));
}

TEST_CASE("harmonic map metadata truncation error has the closed form") {
  // metadata expands 1/(1-rho) through first order, so
  //   eval - metadata = -u_i * s2 * rho^2 / (1-rho),
  // with s2 = sum_l (sum_j u_j w_jl)^2
  const int N = 2, d = 3;
  EquationPreset eq = harmonic_map_sphere_chart(d, N);
  REQUIRE_FALSE(eq.spec.metadata_exact);
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<double> u = {rng.sym(0.25), rng.sym(0.25)};
    std::vector<double> grad(std::size_t(N) * d);
    for (double& g : grad) g = rng.sym(1.0);
    double rho = u[0] * u[0] + u[1] * u[1];
    double s2 = 0;
    for (int l = 0; l < d; ++l) {
      double tl = 0;
      for (int j = 0; j < N; ++j) tl += u[std::size_t(j)] * grad[std::size_t(j) * d + l];
      s2 += tl * tl;
    }
    std::vector<double> a(N), b(N);
    eq.spec.eval(u.data(), grad.data(), a.data());
    eq.spec.eval_from_metadata(u.data(), grad.data(), b.data());
    for (int i = 0; i < N; ++i) {
      double want = -u[std::size_t(i)] * s2 * rho * rho / (1.0 - rho);
      REQUIRE(a[std::size_t(i)] - b[std::size_t(i)] == Catch::Approx(want).margin(1e-14));
    }
  }
}

TEST_CASE("harmonic map exponents and flags") {
  EquationPreset e3 = harmonic_map_sphere_chart(3, 2);
  REQUIRE(e3.nu1 == 0.0);
  REQUIRE(e3.nu1_structured == 2.0);
  REQUIRE(e3.predicted_decay == 2.0);
  REQUIRE(e3.refined_rate == 4.0);
  REQUIRE_FALSE(e3.borderline);
  REQUIRE(e3.spec.scalar_product_structure);
  REQUIRE_FALSE(e3.spec.null_condition_2d);

  EquationPreset e2 = harmonic_map_sphere_chart(2, 2);
  REQUIRE(e2.nu1 == -2.0);
  REQUIRE(e2.nu1_structured == 0.0);
  REQUIRE(e2.borderline);
  REQUIRE(e2.spec.null_condition_2d);
  REQUIRE(e2.predicted_decay == 2.0);  // plane null structure lifts the rate
}

TEST_CASE("curvature system couples through the antisymmetric bracket") {
  EquationPreset eq = h_system_2d(0.7, -1.3);
  REQUIRE(eq.name == "h_system");
  REQUIRE(eq.spec.bracket_structure_2d);
  REQUIRE(eq.spec.null_condition_2d);
  REQUIRE(eq.nu1 == -2.0);
  REQUIRE(eq.nu1_structured == 0.0);
  REQUIRE(eq.borderline);
  REQUIRE(eq.predicted_decay == 2.0);

  // at u = 0 the chart part vanishes and only the bracket survives:
  // f_i = -h_i (w_0x w_1y - w_0y w_1x)
  std::vector<double> u = {0.0, 0.0}, grad = {0.4, -0.9, 1.3, 0.8}, out(2);
  double jac = grad[0] * grad[3] - grad[1] * grad[2];
  eq.spec.eval(u.data(), grad.data(), out.data());
  REQUIRE(out[0] == Catch::Approx(-0.7 * jac).epsilon(1e-13));
  REQUIRE(out[1] == Catch::Approx(1.3 * jac).epsilon(1e-13));
  // the bracket metadata is exact; only the chart truncation differs, and
  // it vanishes at u = 0
  std::vector<double> md(2);
  eq.spec.eval_from_metadata(u.data(), grad.data(), md.data());
  REQUIRE(md[0] == Catch::Approx(out[0]).margin(1e-15));
  REQUIRE(md[1] == Catch::Approx(out[1]).margin(1e-15));

  std::vector<double> bad(8, 0.0);
  bad[0] = 1.0;  // H[0][0][0] must vanish by antisymmetry
  REQUIRE_THROWS_AS(h_system_2d(bad), std::invalid_argument);
  REQUIRE_THROWS_AS(h_system_2d(std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("gradient factor signatures enumerate without duplicates") {
  // one squared factor: (v + w + z)^2 has the 6 distinct unordered splits
  std::set<std::vector<int>> sig;
  detail::gradient_signatures({2, 0, 0}, 1, 3, {0}, sig);
  REQUIRE(sig.size() == 6);
  // two unit factors on the same component: (v+w+z)(v'+w'+z') with the
  // mixed value/time products collapsing, 8 remain
  sig.clear();
  detail::gradient_signatures({1, 1}, 1, 2, {0}, sig);
  REQUIRE(sig.size() == 8);
  // two unit factors on distinct components: nothing collapses
  sig.clear();
  detail::gradient_signatures({1, 0, 1, 0}, 2, 2, {0, 0}, sig);
  REQUIRE(sig.size() == 9);
}

TEST_CASE("smallness diagnostic matches hand enumeration") {
  // pure power: one signature, no gradient weight; the series term is
  // |a| p sigma^{p-1} independent of s
  EquationPreset u5 = semilinear_power(3, 5, 1.0);
  REQUIRE(h1_partial(u5.spec, 3.1, 0.1) == Catch::Approx(5e-4).epsilon(1e-13));
  REQUIRE(h1_partial(u5.spec, 4.6, 0.1) == Catch::Approx(5e-4).epsilon(1e-13));

  // f = |grad u|^2 in d = 3: three monomials q = 2 e_l, each expanding to
  // signatures with tangential totals {0,1,1,2,2,2}
  NonlinearitySpec spec;
  spec.d = 3;
  spec.ncomp = 1;
  for (int l = 0; l < 3; ++l) {
    Monomial m;
    m.p = {0};
    m.q = {0, 0, 0};
    m.q[std::size_t(l)] = 2;
    m.a = 1.0;
    spec.monomials.push_back(m);
  }
  double s = 3.1, sigma = 0.05;
  double per_mode = std::pow(2.5, 2) * 1.0 * 2.0 * sigma;
  double series = 1.0 + 2.0 * std::pow(2.0, (s + 1) / 2) + 3.0 * std::pow(5.0, (s + 1) / 2);
  REQUIRE(h1_partial(spec, s, sigma) == Catch::Approx(3.0 * per_mode * series).epsilon(1e-12));

  spec.monomials.clear();
  REQUIRE_THROWS_AS(h1_partial(spec, s, sigma), std::invalid_argument);
}

TEST_CASE("preset registry dispatches by name") {
  EquationPreset a = equation_preset("semilinear", 3, {});
  REQUIRE(a.nu1 == 2.0);  // defaults p = 5, kappa = 1
  EquationPreset b = equation_preset("semilinear", 3, {{"p", 7.0}, {"kappa", -2.0}});
  REQUIRE(b.nu1 == 4.0);
  double u = 0.5, out = 0;
  b.spec.eval(&u, nullptr, &out);
  REQUIRE(out == Catch::Approx(-2.0 * std::pow(0.5, 7)).epsilon(1e-14));
  EquationPreset c = equation_preset("harmonic_map", 2, {});
  REQUIRE(c.predicted_decay == 2.0);
  EquationPreset h = equation_preset("h_system", 2, {{"H1", 2.0}});
  REQUIRE(h.name == "h_system");
  REQUIRE_THROWS_AS(equation_preset("h_system", 3, {}), std::invalid_argument);
  REQUIRE_THROWS_AS(equation_preset("burgers", 3, {}), std::invalid_argument);
  // every preset advertises the full driver mode list
  for (const char* mode : {"scatter", "scatter_refined", "dirichlet", "zero_scatter",
                           "zero_dirichlet"}) {
    bool found = false;
    for (const std::string& m : a.modes) found = found || m == mode;
    REQUIRE(found);
  }
}
