#include "evshape/numeraire.hpp"

#include <algorithm>
#include <cmath>

#include "evshape/error.hpp"

namespace evshape {
namespace {

constexpr double kHullTol = 1e-13;

void check_input(const Pmf& q) {
  if (q.lo() < 0) throw Error(ErrorCode::NegativeSupport, "lcm needs lo >= 0");
  if (q.is_sub()) throw Error(ErrorCode::SubprobabilityInput, "lcm needs a probability");
}

}  // namespace

double LcmResult::slope_at(std::int64_t n) const {
  if (contacts.size() < 2 || n <= contacts.front() || n > contacts.back()) return 0.0;
  const auto it = std::lower_bound(contacts.begin(), contacts.end(), n);
  return slopes[static_cast<std::size_t>(it - contacts.begin()) - 1];
}

double LcmResult::majorant_at(std::int64_t n) const {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < contacts.size(); ++k) {
    if (n <= contacts[k]) break;
    const auto right = std::min(n, contacts[k + 1]);
    acc += slopes[k] * static_cast<double>(right - contacts[k]);
  }
  return acc;
}

std::vector<double> LcmResult::masses() const {
  std::vector<double> out;
  if (contacts.size() < 2) return out;
  for (std::int64_t n = 0; n <= contacts.back(); ++n) out.push_back(slope_at(n));
  return out;
}

LcmResult lcm(const Pmf& q) {
  check_input(q);
  struct Pt {
    std::int64_t x;
    double y;
  };
  std::vector<Pt> hull{{-1, 0.0}};
  auto below = [](const Pt& o, const Pt& a, const Pt& b) {
    // a on or under the chord o -> b
    const double lhs = (a.y - o.y) * static_cast<double>(b.x - o.x);
    const double rhs = (b.y - o.y) * static_cast<double>(a.x - o.x);
    return lhs <= rhs + kHullTol;
  };
  for (std::int64_t n = 0; n <= q.hi(); ++n) {
    const Pt p{n, q.cdf(n)};
    while (hull.size() >= 2 && below(hull[hull.size() - 2], hull.back(), p)) hull.pop_back();
    hull.push_back(p);
  }
  LcmResult r;
  for (const auto& p : hull) r.contacts.push_back(p.x);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k)
    r.slopes.push_back((hull[k + 1].y - hull[k].y) / static_cast<double>(hull[k + 1].x - hull[k].x));
  return r;
}

EvalFn numeraire_evalue(const Pmf& q) {
  const auto r = lcm(q);
  EvalFn e{0, {}, 0.0, 0.0};
  for (std::int64_t n = 0; n <= q.hi(); ++n) {
    const double f = q.at(n), g = r.slope_at(n);
    e.values.push_back(f > 0.0 ? f / g : 0.0);
  }
  return e;
}

Pmf ripr(const Pmf& q) {
  const auto r = lcm(q);
  std::vector<double> m;
  for (std::int64_t n = 0; n <= q.hi(); ++n) m.push_back(q.at(n) > 0.0 ? r.slope_at(n) : 0.0);
  return Pmf::make(0, std::move(m), true);
}

double max_epower(const Pmf& q) {
  const auto r = lcm(q);
  double acc = 0.0;
  for (std::int64_t n = q.lo(); n <= q.hi(); ++n) {
    const double f = q.at(n);
    if (f > 0.0) acc += f * std::log(f / r.slope_at(n));
  }
  return acc;
}

}  // namespace evshape
