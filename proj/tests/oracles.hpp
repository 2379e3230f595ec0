#pragma once

// Reference computations for the tests. Each one is written from the
// definitions, without reusing library internals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "evshape/evalue.hpp"
#include "evshape/pmf.hpp"

namespace oracle {

using evshape::EvalFn;
using evshape::Pmf;

inline double mean_over(const EvalFn& e, std::int64_t a, std::int64_t b) {
  long double s = 0.0L;
  for (std::int64_t k = a; k <= b; ++k) s += e.at(k);
  return static_cast<double>(s / static_cast<long double>(b - a + 1));
}

// e is a valid e-value for every uniform{0..n}, n <= n_max.
inline bool polar_M_uniforms(const EvalFn& e, std::int64_t n_max = 500) {
  long double s = 0.0L;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    s += e.at(n);
    if (static_cast<double>(s / static_cast<long double>(n + 1)) > 1.0 + 1e-9) return false;
  }
  return true;
}

// Same for every uniform on {theta - a .. theta + b}, a, b <= side.
inline bool polar_D_uniforms(const EvalFn& e, std::int64_t theta, std::int64_t side = 100) {
  std::vector<long double> left(side + 1, 0.0L), right(side + 1, 0.0L);
  for (std::int64_t a = 1; a <= side; ++a) left[a] = left[a - 1] + e.at(theta - a);
  right[0] = e.at(theta);
  for (std::int64_t b = 1; b <= side; ++b) right[b] = right[b - 1] + e.at(theta + b);
  for (std::int64_t a = 0; a <= side; ++a)
    for (std::int64_t b = 0; b <= side; ++b)
      if (static_cast<double>((left[a] + right[b]) / static_cast<long double>(a + b + 1)) >
          1.0 + 1e-9)
        return false;
  return true;
}

// Least concave majorant slopes on {0..K-1} by brute force: F~(n) is the max
// over chords between knots i < n < j (knots include (-1, 0)).
inline std::vector<double> lcm_slopes(const std::vector<double>& f) {
  const int k = static_cast<int>(f.size());
  std::vector<double> x(k + 1), y(k + 1);
  x[0] = -1;
  y[0] = 0;
  for (int i = 0; i < k; ++i) {
    x[i + 1] = i;
    y[i + 1] = y[i] + f[i];
  }
  std::vector<double> maj(k + 1);
  for (int n = 0; n <= k; ++n) {
    double best = y[n];
    for (int i = 0; i <= n; ++i)
      for (int j = n; j <= k; ++j) {
        if (i == j) continue;
        const double t = (x[n] - x[i]) / (x[j] - x[i]);
        best = std::max(best, y[i] + t * (y[j] - y[i]));
      }
    maj[n] = best;
  }
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = maj[i + 1] - maj[i];
  return out;
}

// Antitonic regression with unit weights (pool adjacent violators).
inline std::vector<double> pava_decreasing(const std::vector<double>& f) {
  std::vector<double> level;
  std::vector<int> width;
  for (double v : f) {
    level.push_back(v);
    width.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] < level.back()) {
      const int w = width[width.size() - 2] + width.back();
      const double l = (level[level.size() - 2] * width[width.size() - 2] + level.back() * width.back()) / w;
      level.pop_back();
      width.pop_back();
      level.back() = l;
      width.back() = w;
    }
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < level.size(); ++i) out.insert(out.end(), width[i], level[i]);
  return out;
}

inline double lambda(double a, double b) {
  if (a + b <= 0.0) return 0.0;
  return std::clamp((b - a) / (2.0 * (a + b)), 0.0, 0.5);
}

// Mixture e-process for monotonicity, recomputed from scratch: each component
// is a product over time of wavelet factors fitted on the past.
inline double monotone_mixture(const std::vector<std::int64_t>& obs) {
  std::int64_t top = 0;
  for (auto x : obs) top = std::max(top, x);
  const int comps = static_cast<int>(top) + 1;
  std::vector<double> prod(comps, 1.0);
  for (int m = 0; m < comps; ++m) {
    for (std::size_t k = 0; k < obs.size(); ++k) {
      double cm = 0, cm1 = 0;
      for (std::size_t i = 0; i < k; ++i) {
        cm += obs[i] == m;
        cm1 += obs[i] == m + 1;
      }
      const double l = lambda(cm, cm1);
      if (obs[k] == m) prod[m] *= 1.0 - l;
      if (obs[k] == m + 1) prod[m] *= 1.0 + l;
    }
  }
  double v = std::ldexp(1.0, -comps);
  for (int m = 0; m < comps; ++m) v += std::ldexp(prod[m], -(m + 1));
  return std::log(v);
}

// Both-sided mixture for theta-unimodality, from scratch.
inline double unimodal_mixture(std::int64_t theta, const std::vector<std::int64_t>& obs) {
  std::int64_t far = 1;
  for (auto x : obs) far = std::max<std::int64_t>(far, std::abs(x - theta) + 1);
  double v = 0.0;
  for (int side : {+1, -1}) {
    double rest = 1.0;
    for (std::int64_t m = 0; m < far; ++m) {
      const std::int64_t lo = theta + side * m, hi = theta + side * (m + 1);
      double prod = 1.0;
      for (std::size_t k = 0; k < obs.size(); ++k) {
        double clo = 0, chi = 0;
        for (std::size_t i = 0; i < k; ++i) {
          clo += obs[i] == lo;
          chi += obs[i] == hi;
        }
        const double l = lambda(clo, chi);
        if (obs[k] == lo) prod *= 1.0 - l;
        if (obs[k] == hi) prod *= 1.0 + l;
      }
      const double w = std::ldexp(1.0, -static_cast<int>(m) - 2);
      v += w * prod;
      rest -= 2.0 * w;
    }
    v += rest / 2.0;
  }
  return std::log(v);
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, int k, double floor = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(k);
  double s = 0;
  for (auto& x : v) s += x = floor + u(rng);
  for (auto& x : v) x /= s;
  return v;
}

// A random member of the monotone polar built from a non-decreasing rho with
// rho_n <= n.
inline EvalFn random_polar_M_member(std::mt19937_64& rng, int window) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> rho(window + 1);
  rho[0] = 0.0;
  for (int n = 1; n <= window; ++n) {
    const double cap = static_cast<double>(n);
    const double step = u(rng) < 0.3 ? cap - rho[n - 1] : u(rng) * 1.6;
    rho[n] = std::min(cap, rho[n - 1] + step);
  }
  EvalFn e;
  e.lo = 0;
  for (int n = 0; n < window; ++n) e.values.push_back(rho[n + 1] - rho[n]);
  e.left_tail = 1.0;
  e.right_tail = u(rng);
  return e;
}

}  // namespace oracle
