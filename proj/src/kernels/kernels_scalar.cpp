#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "evshape/kernels.hpp"

namespace evshape::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double xlogy_sum(std::span<const double> w, std::span<const double> v) {
  assert(w.size() == v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) continue;
    if (v[i] <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += w[i] * std::log(v[i]);
  }
  return acc;
}

double geometric_lse(std::span<const double> terms, double log_first, double log_ratio) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double peak = kNegInf;
  for (std::size_t i = 0; i < terms.size(); ++i)
    peak = std::max(peak, terms[i] + static_cast<double>(i) * log_ratio);
  if (peak == kNegInf) return kNegInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    acc += std::exp(terms[i] + static_cast<double>(i) * log_ratio - peak);
  return peak + std::log(acc) + log_first;
}

}  // namespace evshape::kernels::scalar
