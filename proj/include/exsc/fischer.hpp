// fischer.hpp - exact decomposition of polynomials as
//   f = harmonic + |x|^2 * quotient
// in rational arithmetic. Used as an independent oracle for the harmonic
// asymptotics of interior solutions.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

namespace exsc {

using Rational = boost::multiprecision::cpp_rational;

/// Sparse polynomial in up to three variables with rational coefficients.
/// Exponent triples always carry three slots; unused variables stay zero.
struct Polynomial {
  int d = 3;
  std::map<std::array<int, 3>, Rational> terms;

  void add(std::array<int, 3> e, const Rational& c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }
  int degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms) deg = std::max(deg, e[0] + e[1] + e[2]);
    return deg;
  }
  bool zero() const { return terms.empty(); }

  double evaluate(const std::array<double, 3>& x) const {
    double sum = 0;
    for (const auto& [e, c] : terms) {
      double t = static_cast<double>(c);
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[std::size_t(i)];
      sum += t;
    }
    return sum;
  }
};

inline Polynomial laplacian(const Polynomial& p) {
  Polynomial out;
  out.d = p.d;
  for (const auto& [e, c] : p.terms)
    for (int i = 0; i < p.d; ++i) {
      if (e[std::size_t(i)] < 2) continue;
      std::array<int, 3> f = e;
      f[std::size_t(i)] -= 2;
      out.add(f, c * e[std::size_t(i)] * (e[std::size_t(i)] - 1));
    }
  return out;
}

/// Multiply by |x|^2.
inline Polynomial radius_squared_times(const Polynomial& p) {
  Polynomial out;
  out.d = p.d;
  for (const auto& [e, c] : p.terms)
    for (int i = 0; i < p.d; ++i) {
      std::array<int, 3> f = e;
      f[std::size_t(i)] += 2;
      out.add(f, c);
    }
  return out;
}

namespace detail {

/// Monomial exponents of total degree k in d variables, in a fixed order.
inline std::vector<std::array<int, 3>> monomials_of_degree(int d, int k) {
  std::vector<std::array<int, 3>> out;
  if (d == 1) {
    out.push_back({k, 0, 0});
  } else if (d == 2) {
    for (int a = k; a >= 0; --a) out.push_back({a, k - a, 0});
  } else {
    for (int a = k; a >= 0; --a)
      for (int b = k - a; b >= 0; --b) out.push_back({a, b, k - a - b});
  }
  return out;
}

/// Exact Gauss-Jordan solve of a square rational system.
inline std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> m,
                                            std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw std::runtime_error("fischer: singular split system");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    Rational inv = m[col][col];
    for (std::size_t j = col; j < n; ++j) m[col][j] /= inv;
    rhs[col] /= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational factor = m[r][col];
      for (std::size_t j = col; j < n; ++j) m[r][j] -= factor * m[col][j];
      rhs[r] -= factor * rhs[col];
    }
  }
  return rhs;
}

}  // namespace detail

struct FischerSplit {
  Polynomial harmonic;
  Polynomial quotient;
};

/// Split f = harmonic + |x|^2 * quotient, exactly, homogeneous degree by
/// homogeneous degree: within degree k the quotient coefficients solve the
/// linear system Delta(|x|^2 q) = Delta(f_k), which is square and
/// invertible on each homogeneous slice.
inline FischerSplit fischer_decompose(const Polynomial& f) {
  if (f.d < 1 || f.d > 3) throw std::invalid_argument("fischer_decompose: d must be 1..3");
  if (f.degree() > 8)
    throw std::invalid_argument("fischer_decompose: degree above supported bound 8");
  FischerSplit out;
  out.harmonic.d = out.quotient.d = f.d;
  int top = f.degree();
  for (int k = 0; k <= top; ++k) {
    Polynomial fk;
    fk.d = f.d;
    for (const auto& [e, c] : f.terms)
      if (e[0] + e[1] + e[2] == k) fk.add(e, c);
    if (fk.zero()) continue;
    if (k < 2) {
      for (const auto& [e, c] : fk.terms) out.harmonic.add(e, c);
      continue;
    }
    auto basis = detail::monomials_of_degree(f.d, k - 2);
    std::map<std::array<int, 3>, std::size_t> row_of;
    for (std::size_t r = 0; r < basis.size(); ++r) row_of[basis[r]] = r;
    std::vector<std::vector<Rational>> m(basis.size(),
                                         std::vector<Rational>(basis.size(), Rational(0)));
    for (std::size_t col = 0; col < basis.size(); ++col) {
      Polynomial probe;
      probe.d = f.d;
      probe.add(basis[col], Rational(1));
      Polynomial image = laplacian(radius_squared_times(probe));
      for (const auto& [e, c] : image.terms) m[row_of.at(e)][col] += c;
    }
    std::vector<Rational> rhs(basis.size(), Rational(0));
    for (const auto& [e, c] : laplacian(fk).terms) rhs[row_of.at(e)] += c;
    std::vector<Rational> q = detail::solve_rational(std::move(m), std::move(rhs));
    Polynomial qk;
    qk.d = f.d;
    for (std::size_t r = 0; r < basis.size(); ++r) qk.add(basis[r], q[r]);
    Polynomial rk = fk;
    for (const auto& [e, c] : radius_squared_times(qk).terms) rk.add(e, -c);
    for (const auto& [e, c] : rk.terms) out.harmonic.add(e, c);
    for (const auto& [e, c] : qk.terms) out.quotient.add(e, c);
  }
  return out;
}

}  // namespace exsc
