#include "evshape/evalue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evshape/error.hpp"
#include "evshape/kernels.hpp"

namespace evshape {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class F>
double reduce_against(const EvalFn& e, std::int64_t plo, std::span<const double> pm, F&& overlap,
                      auto&& tail_term) {
  if (pm.empty()) return 0.0;
  const std::int64_t phi = plo + static_cast<std::int64_t>(pm.size()) - 1;
  double left = 0.0, right = 0.0;
  for (std::int64_t n = plo; n <= phi && n < e.lo; ++n) left += pm[static_cast<std::size_t>(n - plo)];
  for (std::int64_t n = std::max(plo, e.hi() + 1); n <= phi; ++n)
    right += pm[static_cast<std::size_t>(n - plo)];
  double acc = tail_term(left, e.left_tail) + tail_term(right, e.right_tail);
  const std::int64_t a = std::max(plo, e.lo);
  const std::int64_t b = std::min(phi, e.hi());
  if (a <= b) {
    const auto len = static_cast<std::size_t>(b - a + 1);
    acc += overlap(pm.subspan(static_cast<std::size_t>(a - plo), len),
                   std::span<const double>(e.values).subspan(static_cast<std::size_t>(a - e.lo), len));
  }
  return acc;
}

double expectation_impl(const EvalFn& e, std::int64_t lo, std::span<const double> m) {
  return reduce_against(
      e, lo, m, [](auto p, auto v) { return kernels::dot(p, v); },
      [](double mass, double tail) { return mass * tail; });
}

}  // namespace

double EvalFn::at(std::int64_t n) const {
  if (n < lo) return left_tail;
  if (n > hi()) return right_tail;
  return values[static_cast<std::size_t>(n - lo)];
}

double wavelet_lambda(double f_m, double f_m1) {
  const double s = f_m + f_m1;
  if (!(s > 0.0)) return 0.0;
  return std::clamp((f_m1 - f_m) / (2.0 * s), 0.0, 0.5);
}

WaveletParams wavelet_params(const Pmf& q, std::int64_t m) {
  return {m, wavelet_lambda(q.at(m), q.at(m + 1))};
}

EvalFn wavelet_at(std::int64_t m, double lambda) {
  return {m, {1.0 - lambda, 1.0 + lambda}, 1.0, 1.0};
}

EvalFn wavelet_evalue(const Pmf& q, std::int64_t m) {
  return wavelet_at(m, wavelet_params(q, m).lambda);
}

double expectation(const EvalFn& e, const Pmf& p) {
  return expectation_impl(e, p.lo(), p.masses());
}

double expectation(const EvalFn& e, const MassFunction& p) {
  return expectation_impl(e, p.lo, p.masses);
}

double epower(const EvalFn& e, const Pmf& q) {
  return reduce_against(
      e, q.lo(), q.masses(), [](auto w, auto v) { return kernels::xlogy_sum(w, v); },
      [](double mass, double tail) {
        if (!(mass > 0.0)) return 0.0;
        return tail > 0.0 ? mass * std::log(tail) : kNegInf;
      });
}

double epower_lower_bound(const Pmf& q, std::int64_t m) {
  const double a = q.at(m), b = q.at(m + 1);
  const double delta = b - a;
  if (!(delta > 0.0)) throw Error(ErrorCode::NoViolationAt, "no increase at m=" + std::to_string(m));
  return delta * delta / (4.0 * (a + b));
}

bool is_in_polar_M(const EvalFn& e) {
  if (e.right_tail > 1.0 + kPolarTol) return false;
  double s = 0.0;
  for (std::int64_t n = 0; n <= e.hi(); ++n) {
    s += e.at(n);
    if (s > static_cast<double>(n + 1) * (1.0 + kPolarTol)) return false;
  }
  return true;
}

bool is_in_polar_D(const EvalFn& e, std::int64_t theta) {
  if (e.at(theta) > 1.0 + kPolarTol) return false;
  if (e.left_tail > 1.0 || e.right_tail > 1.0) return false;
  const auto cert = certificate_D(e, theta);
  double sup_r = kNegInf, sup_l = kNegInf;
  for (std::size_t i = 0; i < cert.rho.size(); ++i)
    sup_r = std::max(sup_r, cert.rho[i] - static_cast<double>(i + 1));
  for (std::size_t i = 0; i < cert.eta.size(); ++i)
    sup_l = std::max(sup_l, cert.eta[i] - static_cast<double>(i + 1));
  return sup_r + sup_l <= kPolarTol;
}

PolarCertificate certificate_M(const EvalFn& e) {
  PolarCertificate c;
  const std::int64_t end = std::max<std::int64_t>(e.hi() + 1, 0);
  double s = 0.0;
  for (std::int64_t n = 0; n <= end; ++n) {
    s += e.at(n);
    c.rho.push_back(s);
  }
  return c;
}

PolarCertificate certificate_D(const EvalFn& e, std::int64_t theta) {
  PolarCertificate c;
  const double head = 0.5 * (1.0 + e.at(theta));
  const std::int64_t nr = std::max<std::int64_t>(1, e.hi() - theta + 2);
  const std::int64_t nl = std::max<std::int64_t>(1, theta - e.lo + 2);
  double s = head;
  c.rho.push_back(s);
  for (std::int64_t k = 1; k < nr; ++k) c.rho.push_back(s += e.at(theta + k));
  s = head;
  c.eta.push_back(s);
  for (std::int64_t k = 1; k < nl; ++k) c.eta.push_back(s += e.at(theta - k));
  return c;
}

EvalFn evalue_from_rho(std::span<const double> rho) {
  EvalFn e{0, {}, 1.0, 1.0};
  double prev = 0.0;
  for (double r : rho) {
    e.values.push_back(std::max(0.0, r - prev));
    prev = r;
  }
  return e;
}

EvalFn xq_evalue(const Pmf& q) {
  if (q.lo() < 0 && !q.is_zero()) throw Error(ErrorCode::NegativeSupport, "xq_evalue needs lo >= 0");
  EvalFn e{q.lo(), {}, 0.0, 0.0};
  for (std::int64_t n = q.lo(); n <= q.hi(); ++n)
    e.values.push_back(static_cast<double>(n + 1) * q.at(n));
  return e;
}

bool is_xq_form(const EvalFn& e) {
  if (e.right_tail != 0.0) throw Error(ErrorCode::NonzeroTail, "is_xq_form needs right_tail = 0");
  for (std::int64_t n = e.lo; n < 0 && n <= e.hi(); ++n)
    if (e.at(n) != 0.0) throw Error(ErrorCode::NegativeSupport, "xq form lives on n >= 0");
  double s = 0.0;
  for (std::int64_t n = 0; n <= e.hi(); ++n) s += e.at(n) / static_cast<double>(n + 1);
  return s <= 1.0 + kPolarTol;
}

EvalFn witness(const Pmf& q, std::optional<std::int64_t> theta) {
  if (!theta) {
    if (q.lo() < 0) throw Error(ErrorCode::NegativeSupport, "monotone witness needs lo >= 0");
    std::optional<std::int64_t> best;
    double best_bound = 0.0;
    for (std::int64_t m = std::max<std::int64_t>(0, q.lo() - 1); m < q.hi(); ++m) {
      if (!(q.at(m + 1) > q.at(m) + kShapeTol)) continue;
      const double b = epower_lower_bound(q, m);
      if (!best || b > best_bound) {
        best = m;
        best_bound = b;
      }
    }
    if (!best) throw Error(ErrorCode::NoViolation, "pmf is monotone");
    return wavelet_evalue(q, *best);
  }

  const std::int64_t t = *theta;
  double worst = kShapeTol;
  std::optional<EvalFn> out;
  // Rise after the mode: move one unit of value from m to m + 1.
  for (std::int64_t m = std::max(t, q.lo() - 1); m <= q.hi(); ++m) {
    const double d = q.at(m + 1) - q.at(m);
    if (d > worst) {
      worst = d;
      out = EvalFn{m, {0.0, 2.0}, 1.0, 1.0};
    }
  }
  // Fall before the mode: move one unit from n to n - 1.
  for (std::int64_t n = q.lo(); n <= std::min(t, q.hi() + 1); ++n) {
    const double d = q.at(n - 1) - q.at(n);
    if (d > worst) {
      worst = d;
      out = EvalFn{n - 1, {2.0, 0.0}, 1.0, 1.0};
    }
  }
  if (!out) throw Error(ErrorCode::NoViolation, "pmf is unimodal at theta=" + std::to_string(t));
  return *out;
}

}  // namespace evshape
