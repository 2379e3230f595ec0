#include "evshape/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evshape/error.hpp"

namespace evshape {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHullTol = 1e-13;

// Index i with x in (b_i, b_{i+1}]; b.size() - 1 means the tail; x > 0.
std::size_t piece_of(const std::vector<double>& b, double x) {
  const auto it = std::lower_bound(b.begin(), b.end(), x);
  return static_cast<std::size_t>(it - b.begin()) - 1;
}

struct Lin {
  double a, b;
};

Lin lin_at(const PiecewiseLinear& e, double x) {
  const auto i = piece_of(e.breakpoints, x);
  if (i + 1 >= e.breakpoints.size()) return {e.tail_level, 0.0};
  return {e.intercepts[i], e.slopes[i]};
}

// Union of both breakpoint sets, sorted and unique.
std::vector<double> merged(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

// int_u^v log(a + b t) dt
double integral_log(Lin f, double u, double v) {
  if (f.b == 0.0) return f.a > 0.0 ? (v - u) * std::log(f.a) : kNegInf;
  const double fu = f.a + f.b * u, fv = f.a + f.b * v;
  if (!(std::max(fu, fv) > 0.0)) return kNegInf;
  return ((xlogx(fv) - fv) - (xlogx(fu) - fu)) / f.b;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadAlpha, std::to_string(alpha));
}

// A nonzero tail means infinite mass; report that before the mass check does.
void check_finite_support(const StepDensity& q) {
  if (q.density.tail_level != 0.0)
    throw Error(ErrorCode::UnboundedSupport, "density has a nonzero tail level");
  q.validate();
}

}  // namespace

double StepFn::at(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return value_at_0;
  const auto i = piece_of(breakpoints, x);
  return i + 1 >= breakpoints.size() ? tail_level : levels[i];
}

void StepFn::validate() const {
  if (breakpoints.empty() || breakpoints.front() != 0.0)
    throw Error(ErrorCode::BadInterval, "breakpoints must start at 0");
  if (levels.size() + 1 != breakpoints.size())
    throw Error(ErrorCode::BadInterval, "need one level per piece");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]) || !std::isfinite(breakpoints[i]))
      throw Error(ErrorCode::BadInterval, "breakpoints must increase");
  for (double l : levels)
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorCode::NegativeMass, "negative level");
  if (!(value_at_0 >= 0.0) || !(tail_level >= 0.0))
    throw Error(ErrorCode::NegativeMass, "negative value at 0 or tail");
}

double StepDensity::total() const {
  if (density.tail_level > 0.0) return kInf;
  double acc = atom0;
  for (std::size_t i = 0; i < density.levels.size(); ++i)
    acc += density.levels[i] * (density.breakpoints[i + 1] - density.breakpoints[i]);
  return acc;
}

double StepDensity::cdf(double x) const {
  if (x < 0.0) return 0.0;
  double acc = atom0;
  const auto& b = density.breakpoints;
  for (std::size_t i = 0; i + 1 < b.size() && b[i] < x; ++i)
    acc += density.levels[i] * (std::min(x, b[i + 1]) - b[i]);
  if (x > b.back()) acc += density.tail_level * (x - b.back());
  return acc;
}

void StepDensity::validate() const {
  density.validate();
  if (!(atom0 >= 0.0 && atom0 <= 1.0)) throw Error(ErrorCode::NegativeMass, "atom0 outside [0,1]");
  if (total() > 1.0 + 1e-12) throw Error(ErrorCode::MassSumViolation, "total mass > 1");
}

double PiecewiseLinear::at(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return value_at_0;
  const auto f = lin_at(*this, x);
  return f.a + f.b * x;
}

PiecewiseLinear PiecewiseLinear::from(const StepFn& f) {
  PiecewiseLinear out;
  out.breakpoints = f.breakpoints;
  out.intercepts = f.levels;
  out.slopes.assign(f.levels.size(), 0.0);
  out.value_at_0 = f.value_at_0;
  out.tail_level = f.tail_level;
  return out;
}

StepFn bump_evalue(double a, double b) {
  if (!(a > 0.0 && b > a)) throw Error(ErrorCode::BadInterval, "bump needs 0 < a < b");
  return {{0.0, a, b}, {0.0, b / (b - a)}, 0.0, 0.0};
}

PiecewiseLinear xq_evalue_cont(const StepDensity& q) {
  if (q.density.tail_level != 0.0) throw Error(ErrorCode::UnboundedTail, "x q(x) unbounded");
  q.validate();
  if (q.atom0 != 0.0) throw Error(ErrorCode::AtomPresent, "x q(x) needs an atom-free density");
  PiecewiseLinear out;
  out.breakpoints = q.density.breakpoints;
  out.intercepts.assign(q.density.levels.size(), 0.0);
  out.slopes = q.density.levels;
  return out;
}

bool is_in_polar_U(const PiecewiseLinear& e, bool require_jump_guard) {
  if (e.tail_level > 1.0) return false;
  if (require_jump_guard && e.value_at_0 > 1.0) return false;
  auto ok = [](double g, double x) { return g <= 1e-9 * x + 1e-12; };
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < e.breakpoints.size(); ++i) {
    const double u = e.breakpoints[i], v = e.breakpoints[i + 1];
    const double a = e.intercepts[i], b = e.slopes[i];
    if (a + b * u < -1e-12 || a + b * v < -1e-12) return false;
    auto piece = [&](double t) { return a * (t - u) + 0.5 * b * (t * t - u * u); };
    // Interior maximum of G when the integrand crosses 1 from above.
    if (b < 0.0) {
      const double t = (1.0 - a) / b;
      if (t > u && t < v && !ok(integral + piece(t) - t, t)) return false;
    }
    integral += piece(v);
    if (!ok(integral - v, v)) return false;
  }
  return true;
}

bool is_in_polar_U(const StepFn& e, bool require_jump_guard) {
  return is_in_polar_U(PiecewiseLinear::from(e), require_jump_guard);
}

double expectation(const PiecewiseLinear& e, const StepDensity& p) {
  check_finite_support(p);
  double acc = p.atom0 > 0.0 ? p.atom0 * e.value_at_0 : 0.0;
  const auto b = merged(e.breakpoints, p.density.breakpoints);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double u = b[i], v = b[i + 1];
    const double level = p.density.at(0.5 * (u + v));
    if (level == 0.0) continue;
    const auto f = lin_at(e, 0.5 * (u + v));
    acc += level * (f.a * (v - u) + 0.5 * f.b * (v * v - u * u));
  }
  return acc;
}

double expectation(const StepFn& e, const StepDensity& p) {
  return expectation(PiecewiseLinear::from(e), p);
}

double epower(const PiecewiseLinear& e, const StepDensity& q) {
  check_finite_support(q);
  double acc = 0.0;
  if (q.atom0 > 0.0) acc += e.value_at_0 > 0.0 ? q.atom0 * std::log(e.value_at_0) : kNegInf;
  const auto b = merged(e.breakpoints, q.density.breakpoints);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double u = b[i], v = b[i + 1];
    const double level = q.density.at(0.5 * (u + v));
    if (level == 0.0) continue;
    acc += level * integral_log(lin_at(e, 0.5 * (u + v)), u, v);
  }
  return acc;
}

double epower(const StepFn& e, const StepDensity& q) {
  return epower(PiecewiseLinear::from(e), q);
}

double xq_mixture_bandwidth(const StepDensity& q, double x, double w) {
  if (!(w > 0.0)) throw Error(ErrorCode::BadInterval, "bandwidth must be positive");
  const double lo = std::max(x - w, 0.0), hi = std::max(x, 0.0);
  if (!(hi > lo)) return 0.0;
  const auto& b = q.density.breakpoints;
  double first = 0.0, second = 0.0;
  auto add = [&](double level, double u, double v) {
    if (!(v > u) || level == 0.0) return;
    first += level * 0.5 * (v * v - u * u);
    second += level * (v - u);
  };
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    add(q.density.levels[i], std::max(lo, b[i]), std::min(hi, b[i + 1]));
  add(q.density.tail_level, std::max(lo, b.back()), hi);
  return first / w + second;
}

double edelman_pvalue(double x, double a) {
  const double d = std::abs(x - a);
  const double denom = d + std::abs(x);
  if (denom == 0.0) return 0.0;
  return std::clamp(2.0 * d / denom, 0.0, 1.0);
}

bool RealInterval::contains(double x) const {
  switch (kind) {
    case Kind::Empty: return false;
    case Kind::Open: return lo < x && x < hi;
    case Kind::Singleton: return x == lo;
    case Kind::AllReals: return true;
  }
  return false;
}

double RealInterval::width() const {
  switch (kind) {
    case Kind::Open: return hi - lo;
    case Kind::AllReals: return kInf;
    default: return 0.0;
  }
}

RealInterval edelman_ci(double x, double alpha, double phi) {
  check_alpha(alpha);
  const double r = (2.0 / alpha - 1.0) * std::abs(x - phi);
  if (r == 0.0) return {RealInterval::Kind::Singleton, x, x};
  return {RealInterval::Kind::Open, x - r, x + r};
}

RealInterval cont_mode_ci(double x, double alpha, double phi) {
  check_alpha(alpha);
  if (x == phi) return {RealInterval::Kind::AllReals, -kInf, kInf};
  const double r = (2.0 / alpha + 1.0) * std::abs(x - phi);
  return {RealInterval::Kind::Open, x - r, x + r};
}

StepDensity lcm_cont(const StepDensity& q) {
  check_finite_support(q);
  struct Pt {
    double x, y;
  };
  const auto& b = q.density.breakpoints;
  std::vector<Pt> hull{{0.0, q.atom0}};
  double acc = q.atom0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    acc += q.density.levels[i] * (b[i + 1] - b[i]);
    const Pt p{b[i + 1], acc};
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& m = hull.back();
      if ((m.y - o.y) * (p.x - o.x) > (p.y - o.y) * (m.x - o.x) + kHullTol) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  StepDensity out;
  out.atom0 = q.atom0;
  out.density.breakpoints.clear();
  for (const auto& p : hull) out.density.breakpoints.push_back(p.x);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k)
    out.density.levels.push_back((hull[k + 1].y - hull[k].y) / (hull[k + 1].x - hull[k].x));
  return out;
}

StepFn numeraire_cont(const StepDensity& q) {
  const auto major = lcm_cont(q);
  StepFn out;
  out.breakpoints = q.density.breakpoints;
  const auto& b = q.density.breakpoints;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double f = q.density.levels[i];
    const double g = major.density.at(0.5 * (b[i] + b[i + 1]));
    out.levels.push_back(f > 0.0 ? f / g : 0.0);
  }
  out.value_at_0 = q.atom0 > 0.0 ? 1.0 : 0.0;
  out.tail_level = 0.0;
  return out;
}

}  // namespace evshape
