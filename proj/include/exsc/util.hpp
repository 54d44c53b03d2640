// util.hpp - small shared helpers: threading, RNG, least squares, text keys.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace exsc {

/// Static-partition parallel map over [0,n). Each worker owns a disjoint
/// index range, so results are identical for any thread count as long as
/// the body writes only to slot i.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t nw = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    std::size_t lo = n * w / nw, hi = n * (w + 1) / nw;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Deterministic uniform doubles in [0,1) from raw mt19937_64 bits.
/// std::uniform_real_distribution is implementation-defined; this is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform() {
    state_ = next(state_);
    return double(state_ >> 11) * 0x1.0p-53;
  }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Symmetric uniform in [-a, a].
  double sym(double a) { return uniform(-a, a); }

 private:
  // splitmix64: tiny, well mixed, reproducible everywhere.
  static std::uint64_t next(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

struct LineFit {
  double slope = 0, intercept = 0, rms_residual = 0;
  int npoints = 0;
};

/// Ordinary least squares y = a + b x. Needs at least two distinct x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 paired points");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / double(n));
  f.npoints = int(n);
  return f;
}

/// |x| <-> (sign, log|x|) pair that stays representable far beyond double
/// range (exponents up to ~1e4 appear in weighted mode sums).
struct LogMagnitude {
  int sign = 0;        // -1, 0, +1
  double log_abs = -std::numeric_limits<double>::infinity();

  static LogMagnitude from(double x) {
    LogMagnitude m;
    if (x == 0) return m;
    m.sign = x > 0 ? 1 : -1;
    m.log_abs = std::log(std::abs(x));
    return m;
  }
  static LogMagnitude from_log(int sign, double la) { return LogMagnitude{sign, la}; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool finite() const { return sign == 0 || std::isfinite(log_abs); }
};

/// log(sum of exp(terms)) with max subtraction; empty or all -inf gives -inf.
inline double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms)
    if (t > m) m = t;
  if (!std::isfinite(m)) return m;
  double acc = 0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace exsc
