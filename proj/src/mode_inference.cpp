#include "evshape/mode_inference.hpp"

#include <cmath>

#include "evshape/error.hpp"

namespace evshape {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadAlpha, std::to_string(alpha));
}

// Smallest integer strictly above v; values within 1e-9 of an integer count as
// that integer so open endpoints stay excluded.
std::int64_t first_above(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<std::int64_t>(r) + 1;
  return static_cast<std::int64_t>(std::ceil(v));
}

std::int64_t last_below(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<std::int64_t>(r) - 1;
  return static_cast<std::int64_t>(std::floor(v));
}

}  // namespace

ModeInterval one_obs_ci(std::int64_t x, double alpha, std::int64_t phi) {
  check_alpha(alpha);
  if (x == phi) return ModeInterval::all();
  const double t = 2.0 / alpha + 1.0;
  const double r = t * std::abs(static_cast<double>(x - phi));
  const double c = static_cast<double>(x);
  return ModeInterval::range(first_above(c - r), last_below(c + r));
}

ModeInterval one_obs_ci_finite(std::int64_t x, double alpha, std::int64_t phi) {
  if (phi == 0) throw Error(ErrorCode::ZeroPhi, "finite CI needs phi != 0");
  return intersect(one_obs_ci(x, alpha / 2.0, phi), one_obs_ci(x, alpha / 2.0, -phi));
}

ConfidenceSet rejected_above(const UnimodalFamily& family, double tau) {
  ConfidenceSet out;
  if (family.n() == 0) return out;
  out.rejected = family.rejected(std::log(tau) + kLogThresholdTol);
  if (tau > 1.0) {
    const auto w = scan_half_width(family.n(), tau);
    const auto tr = family.tracked();
    // tracked() is [min - 1, max + 1]
    out.window = ModeInterval::range(tr.lo + 1 - w, tr.hi - 1 + w);
  } else {
    out.window = ModeInterval::all();
  }
  return out;
}

ConfidenceSet confidence_set(const UnimodalFamily& family, double alpha) {
  check_alpha(alpha);
  return rejected_above(family, 1.0 / alpha);
}

ModeInterval strong_hull(const IntSet& weak) { return weak.hull(); }

IntSet mode_estimate(const UnimodalFamily& family) {
  if (family.n() == 0) return IntSet::all();
  const double n = static_cast<double>(family.n());
  return rejected_above(family, n * n).weak();
}

Coverage one_obs_coverage(const Pmf& p, double alpha, std::int64_t phi) {
  const auto modes = mode_set(p);
  if (!modes.is_range())
    throw Error(ErrorCode::BadInterval, "coverage needs a unimodal pmf with finite mode set");
  Coverage c{1.0, 0.0};
  for (std::int64_t t = modes.lo; t <= modes.hi; ++t) {
    double hit = 0.0;
    for (std::int64_t x = p.lo(); x <= p.hi(); ++x)
      if (one_obs_ci(x, alpha, phi).contains(t)) hit += p.at(x);
    c.weak = std::min(c.weak, hit);
  }
  for (std::int64_t x = p.lo(); x <= p.hi(); ++x) {
    const auto ci = one_obs_ci(x, alpha, phi);
    if (intersect(ci, modes) == modes) c.strong += p.at(x);
  }
  return c;
}

UnrestrictedModeTest::UnrestrictedModeTest(double alpha, std::int64_t phi)
    : alpha_(alpha), phi_(phi) {
  check_alpha(alpha);
  if (phi == 0) throw Error(ErrorCode::ZeroPhi, "unrestricted test needs phi != 0");
}

Decision UnrestrictedModeTest::step(std::int64_t x) {
  if (phase_ == Phase::Rejected) throw Error(ErrorCode::AlreadyRejected, "test already rejected");
  ++n_;
  if (phase_ == Phase::AwaitingFirst) {
    candidates_ = intersect(one_obs_ci(x, alpha_ / 3.0, phi_), one_obs_ci(x, alpha_ / 3.0, -phi_));
    phase_ = Phase::Running;
    return Decision::Continue;
  }
  family_.update(x);
  if (log_value() >= std::log(3.0 / alpha_)) {
    phase_ = Phase::Rejected;
    rejected_at_ = n_;
    return Decision::Reject;
  }
  return Decision::Continue;
}

double UnrestrictedModeTest::log_value() const {
  if (family_.n() == 0) return 0.0;
  return family_.min_value(candidates_);
}

}  // namespace evshape
