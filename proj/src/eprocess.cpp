#include "evshape/eprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "evshape/error.hpp"
#include "evshape/evalue.hpp"
#include "evshape/kernels.hpp"
#include "evshape/numeraire.hpp"

namespace evshape {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lambda_of(std::uint64_t a, std::uint64_t b) {
  return wavelet_lambda(static_cast<double>(a), static_cast<double>(b));
}

// log( sum_{m<K} 2^{-m-1-shift} e^{l_m} + 2^{-K-shift} ).
double dyadic_mixture(const std::vector<double>& l, int shift) {
  const double k = static_cast<double>(l.size());
  const double head = kernels::geometric_lse(l, -(1.0 + shift) * kLn2, -kLn2);
  return log_add(head, -(k + shift) * kLn2);
}

std::int64_t sat_add(std::int64_t a, std::uint64_t c) {
  const auto lim = static_cast<std::uint64_t>(IntSet::kPosInf - 1 - std::max<std::int64_t>(a, 0));
  if (a < 0) return a + static_cast<std::int64_t>(std::min<std::uint64_t>(c, lim));
  return a + static_cast<std::int64_t>(std::min(c, lim));
}

std::int64_t sat_sub(std::int64_t a, std::uint64_t c) {
  const auto lim = static_cast<std::uint64_t>(std::min<std::int64_t>(a, 0) - (IntSet::kNegInf + 1));
  return a - static_cast<std::int64_t>(std::min(c, lim));
}

}  // namespace

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

CountTable CountTable::from(std::int64_t lo, std::vector<std::uint64_t> counts) {
  CountTable t;
  t.lo_ = lo;
  t.counts_ = std::move(counts);
  return t;
}

std::uint64_t CountTable::get(std::int64_t x) const {
  if (x < lo_ || x >= lo_ + static_cast<std::int64_t>(counts_.size())) return 0;
  return counts_[static_cast<std::size_t>(x - lo_)];
}

void CountTable::increment(std::int64_t x) {
  if (counts_.empty()) {
    lo_ = x;
    counts_.assign(1, 0);
  } else if (x < lo_) {
    counts_.insert(counts_.begin(), static_cast<std::size_t>(lo_ - x), 0);
    lo_ = x;
  } else if (x >= lo_ + static_cast<std::int64_t>(counts_.size())) {
    counts_.resize(static_cast<std::size_t>(x - lo_ + 1), 0);
  }
  ++counts_[static_cast<std::size_t>(x - lo_)];
}

void MonotoneTracker::touch(std::size_t m) {
  if (log_factors_.size() <= m) {
    log_factors_.resize(m + 1, 0.0);
    active_.resize(m + 1, false);
  }
  active_[m] = true;
}

void MonotoneTracker::update(std::int64_t x) {
  if (x < 0) throw Error(ErrorCode::NegativeObservation, "x=" + std::to_string(x));
  const auto ux = static_cast<std::size_t>(x);
  if (counts_.size() < ux + 2) counts_.resize(ux + 2, 0);
  touch(ux);
  if (ux >= 1) {
    touch(ux - 1);
    log_factors_[ux - 1] += std::log1p(lambda_of(counts_[ux - 1], counts_[ux]));
  }
  log_factors_[ux] += std::log1p(-lambda_of(counts_[ux], counts_[ux + 1]));
  ++counts_[ux];
  ++n_;
}

double MonotoneTracker::mixture_value() const {
  if (log_factors_.empty()) return 0.0;
  return dyadic_mixture(log_factors_, 0);
}

double MonotoneTracker::component_value(std::int64_t m) const {
  if (m < 0 || static_cast<std::size_t>(m) >= log_factors_.size()) return 0.0;
  return log_factors_[static_cast<std::size_t>(m)];
}

MonotoneTracker MonotoneTracker::replay(std::span<const std::int64_t> obs) {
  MonotoneTracker t;
  for (auto x : obs) t.update(x);
  return t;
}

MonotoneTracker MonotoneTracker::restore(std::uint64_t n, std::vector<std::uint64_t> counts,
                                         std::vector<double> log_factors,
                                         std::vector<bool> active) {
  if (log_factors.size() != active.size())
    throw Error(ErrorCode::ParseError, "log_factors and active differ in length");
  MonotoneTracker t;
  t.n_ = n;
  t.counts_ = std::move(counts);
  t.log_factors_ = std::move(log_factors);
  t.active_ = std::move(active);
  if (t.counts_.size() < t.log_factors_.size() + 1) t.counts_.resize(t.log_factors_.size() + 1, 0);
  return t;
}

void UnimodalTracker::apply(std::vector<double>& side, std::int64_t m, double log_factor) {
  const auto um = static_cast<std::size_t>(m);
  if (side.size() <= um) side.resize(um + 1, 0.0);
  side[um] += log_factor;
}

void UnimodalTracker::update(std::int64_t x) {
  const std::int64_t d = x - theta_;
  const auto c = [&](std::int64_t k) { return counts_.get(k); };
  // Rises to the right of theta; x sits at m + 1 for m = d - 1 and at m for m = d.
  if (d - 1 >= 0) apply(plus_, d - 1, std::log1p(lambda_of(c(x - 1), c(x))));
  if (d >= 0) apply(plus_, d, std::log1p(-lambda_of(c(x), c(x + 1))));
  // Mirror image on the left, with the empirical of theta - X.
  const std::int64_t y = -d;
  if (y - 1 >= 0) apply(minus_, y - 1, std::log1p(lambda_of(c(x + 1), c(x))));
  if (y >= 0) apply(minus_, y, std::log1p(-lambda_of(c(x), c(x - 1))));
  counts_.increment(x);
  ++n_;
}

double UnimodalTracker::value() const {
  return log_add(dyadic_mixture(plus_, 1), dyadic_mixture(minus_, 1));
}

double UnimodalTracker::plus_value(std::int64_t m) const {
  if (m < 0 || static_cast<std::size_t>(m) >= plus_.size()) return 0.0;
  return plus_[static_cast<std::size_t>(m)];
}

double UnimodalTracker::minus_value(std::int64_t m) const {
  if (m < 0 || static_cast<std::size_t>(m) >= minus_.size()) return 0.0;
  return minus_[static_cast<std::size_t>(m)];
}

UnimodalTracker UnimodalTracker::replay(std::int64_t theta, std::span<const std::int64_t> obs) {
  UnimodalTracker t(theta);
  for (auto x : obs) t.update(x);
  return t;
}

UnimodalTracker UnimodalTracker::restore(std::int64_t theta, std::uint64_t n, CountTable counts,
                                         std::vector<double> log_plus,
                                         std::vector<double> log_minus) {
  UnimodalTracker t(theta);
  t.n_ = n;
  t.counts_ = std::move(counts);
  t.plus_ = std::move(log_plus);
  t.minus_ = std::move(log_minus);
  return t;
}

ModeInterval UnimodalFamily::tracked() const {
  if (trackers_.empty()) return ModeInterval::empty();
  return ModeInterval::range(first_theta_,
                             first_theta_ + static_cast<std::int64_t>(trackers_.size()) - 1);
}

const UnimodalTracker& UnimodalFamily::tracker(std::int64_t theta) const {
  if (!tracked().contains(theta))
    throw Error(ErrorCode::MissingTracker, "theta=" + std::to_string(theta));
  return trackers_[static_cast<std::size_t>(theta - first_theta_)];
}

void UnimodalFamily::update(std::int64_t x) {
  if (trackers_.empty()) {
    first_theta_ = x - 1;
    for (std::int64_t t = x - 1; t <= x + 1; ++t) trackers_.emplace_back(t);
  } else {
    const std::int64_t last = first_theta_ + static_cast<std::int64_t>(trackers_.size()) - 1;
    for (std::int64_t t = first_theta_ - 1; t >= x - 1; --t) {
      trackers_.push_front(UnimodalTracker::replay(t, obs_));
      first_theta_ = t;
    }
    for (std::int64_t t = last + 1; t <= x + 1; ++t)
      trackers_.push_back(UnimodalTracker::replay(t, obs_));
  }
  for (auto& t : trackers_) t.update(x);
  obs_.push_back(x);
}

double UnimodalFamily::beyond(double edge_value, std::uint64_t c) const {
  const double cd = static_cast<double>(c);
  return log_add(std::log1p(-std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(c, 4000)))),
                 edge_value - cd * kLn2);
}

double UnimodalFamily::value(std::int64_t theta) const {
  if (trackers_.empty()) return 0.0;
  const auto range = tracked();
  if (range.contains(theta)) return tracker(theta).value();
  if (theta > range.hi)
    return beyond(trackers_.back().value(),
                  static_cast<std::uint64_t>(theta) - static_cast<std::uint64_t>(range.hi));
  return beyond(trackers_.front().value(),
                static_cast<std::uint64_t>(range.lo) - static_cast<std::uint64_t>(theta));
}

IntSet UnimodalFamily::rejected(double log_tau) const {
  IntSet out;
  if (trackers_.empty()) {
    if (0.0 > log_tau) return IntSet::all();
    return out;
  }
  const auto range = tracked();
  for (std::int64_t t = range.lo; t <= range.hi; ++t)
    if (tracker(t).value() > log_tau) out.add(t);

  const bool at_limit = 0.0 > log_tau;
  // The value beyond an edge is monotone in the distance c, so the rejected
  // distances form a prefix or a suffix of [1, inf).
  using Span = std::pair<std::uint64_t, std::uint64_t>;
  auto side = [&](double edge) -> Span {
    auto pred = [&](std::uint64_t c) { return beyond(edge, c) > log_tau; };
    const bool first = pred(1);
    if (first == at_limit) return first ? Span{1, ~0ULL} : Span{1, 0};
    std::uint64_t good = 1, far = 2;
    while (pred(far) != at_limit && far < (1ULL << 62)) {
      good = far;
      far *= 2;
    }
    while (far - good > 1) {
      const std::uint64_t mid = good + (far - good) / 2;
      (pred(mid) == first ? good : far) = mid;
    }
    // good: last c with the near-edge verdict.
    return first ? Span{1, good} : Span{good + 1, ~0ULL};
  };

  const auto [r0, r1] = side(trackers_.back().value());
  if (r0 <= r1)
    out.add(sat_add(range.hi, r0), r1 == ~0ULL ? IntSet::kPosInf : sat_add(range.hi, r1));
  const auto [l0, l1] = side(trackers_.front().value());
  if (l0 <= l1)
    out.add(l1 == ~0ULL ? IntSet::kNegInf : sat_sub(range.lo, l1), sat_sub(range.lo, l0));
  return out;
}

double UnimodalFamily::min_value(const ModeInterval& range) const {
  if (range.is_all()) throw Error(ErrorCode::InfiniteRange, "minimum over all of Z");
  if (range.is_empty()) throw Error(ErrorCode::MissingTracker, "minimum over an empty range");
  if (trackers_.empty()) return 0.0;
  const auto tr = tracked();
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t t = std::max(range.lo, tr.lo); t <= std::min(range.hi, tr.hi); ++t)
    best = std::min(best, tracker(t).value());
  // Outside the tracked window the value is monotone, so the ends suffice.
  if (range.hi > tr.hi) {
    const auto a = std::max(range.lo, tr.hi + 1);
    best = std::min({best, value(a), value(range.hi)});
  }
  if (range.lo < tr.lo) {
    const auto b = std::min(range.hi, tr.lo - 1);
    best = std::min({best, value(b), value(range.lo)});
  }
  return best;
}

double range_value(const std::map<std::int64_t, UnimodalTracker>& trackers,
                   const ModeInterval& range) {
  if (range.is_all()) throw Error(ErrorCode::InfiniteRange, "minimum over all of Z");
  if (range.is_empty()) throw Error(ErrorCode::MissingTracker, "minimum over an empty range");
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t t = range.lo; t <= range.hi; ++t) {
    const auto it = trackers.find(t);
    if (it == trackers.end()) throw Error(ErrorCode::MissingTracker, "theta=" + std::to_string(t));
    best = std::min(best, it->second.value());
  }
  return best;
}

double numeraire_eprocess(const Pmf& q, std::span<const std::int64_t> obs) {
  const auto hull = lcm(q);
  double acc = 0.0;
  for (auto x : obs) {
    if (x < 0) throw Error(ErrorCode::NegativeObservation, "x=" + std::to_string(x));
    const double f = q.at(x);
    if (!(f > 0.0)) return kNegInf;
    acc += std::log(f / hull.slope_at(x));
  }
  return acc;
}

std::int64_t scan_half_width(std::uint64_t n, double tau) {
  if (!(tau > 1.0)) throw Error(ErrorCode::InfiniteRange, "scan width needs tau > 1");
  const double w = static_cast<double>(n) * std::log2(1.5) - std::log2(tau - 1.0) + 2.0;
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(w)));
}

}  // namespace evshape
