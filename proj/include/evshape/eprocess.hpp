#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <vector>

#include "evshape/intset.hpp"
#include "evshape/pmf.hpp"

namespace evshape {

// Integer counts over a growable window of Z.
class CountTable {
 public:
  static CountTable from(std::int64_t lo, std::vector<std::uint64_t> counts);
  std::uint64_t get(std::int64_t x) const;
  void increment(std::int64_t x);
  std::int64_t lo() const { return lo_; }
  const std::vector<std::uint64_t>& raw() const { return counts_; }

 private:
  std::int64_t lo_ = 0;
  std::vector<std::uint64_t> counts_;
};

// Dyadic mixture over m >= 0 of plug-in wavelet processes testing
// monotonicity. All values are natural logs.
class MonotoneTracker {
 public:
  void update(std::int64_t x);
  double mixture_value() const;
  double component_value(std::int64_t m) const;

  std::uint64_t n() const { return n_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  // Dense log factors indexed by m; entries never touched are 0 and inactive.
  const std::vector<double>& log_factors() const { return log_factors_; }
  const std::vector<bool>& active() const { return active_; }

  static MonotoneTracker replay(std::span<const std::int64_t> obs);
  // Rebuilds from a snapshot; sizes must agree.
  static MonotoneTracker restore(std::uint64_t n, std::vector<std::uint64_t> counts,
                                 std::vector<double> log_factors, std::vector<bool> active);

 private:
  void touch(std::size_t m);

  std::uint64_t n_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<double> log_factors_;
  std::vector<bool> active_;
};

// Dyadic mixture over both sides of theta for testing theta-unimodality.
class UnimodalTracker {
 public:
  explicit UnimodalTracker(std::int64_t theta = 0) : theta_(theta) {}

  void update(std::int64_t x);
  double value() const;
  double plus_value(std::int64_t m) const;
  double minus_value(std::int64_t m) const;

  std::int64_t theta() const { return theta_; }
  std::uint64_t n() const { return n_; }
  const CountTable& counts() const { return counts_; }
  const std::vector<double>& log_plus() const { return plus_; }
  const std::vector<double>& log_minus() const { return minus_; }

  static UnimodalTracker replay(std::int64_t theta, std::span<const std::int64_t> obs);
  static UnimodalTracker restore(std::int64_t theta, std::uint64_t n, CountTable counts,
                                 std::vector<double> log_plus, std::vector<double> log_minus);

 private:
  void apply(std::vector<double>& side, std::int64_t m, double log_factor);

  std::int64_t theta_;
  std::uint64_t n_ = 0;
  CountTable counts_;
  std::vector<double> plus_;
  std::vector<double> minus_;
};

// J_n(theta) for every integer theta at once. Trackers are kept only for theta
// in [min obs - 1, max obs + 1]; beyond that range only one side of the mixture
// is ever active and the value follows exactly from the edge tracker:
//   J(edge + c) = 1 + 2^-c (J(edge) - 1).
class UnimodalFamily {
 public:
  void update(std::int64_t x);

  std::uint64_t n() const { return obs_.size(); }
  const std::vector<std::int64_t>& observations() const { return obs_; }
  // [min obs - 1, max obs + 1]; Empty before the first observation.
  ModeInterval tracked() const;
  const UnimodalTracker& tracker(std::int64_t theta) const;

  double value(std::int64_t theta) const;
  // {theta : log J_n(theta) > log_tau}, exact over all of Z.
  IntSet rejected(double log_tau) const;
  // min over theta in a finite range; throws InfiniteRange or MissingTracker
  // (for an empty range).
  double min_value(const ModeInterval& range) const;

 private:
  double beyond(double edge_value, std::uint64_t c) const;

  std::vector<std::int64_t> obs_;
  std::int64_t first_theta_ = 0;
  std::deque<UnimodalTracker> trackers_;
};

// Free-function forms.
inline MonotoneTracker new_monotone_tracker() { return {}; }
inline void update_monotone(MonotoneTracker& t, std::int64_t x) { t.update(x); }
inline double mixture_value(const MonotoneTracker& t) { return t.mixture_value(); }
inline double component_value(const MonotoneTracker& t, std::int64_t m) {
  return t.component_value(m);
}
inline UnimodalTracker new_unimodal_tracker(std::int64_t theta) { return UnimodalTracker(theta); }
inline void update_unimodal(UnimodalTracker& t, std::int64_t x) { t.update(x); }
inline double unimodal_value(const UnimodalTracker& t) { return t.value(); }

double range_value(const std::map<std::int64_t, UnimodalTracker>& trackers,
                   const ModeInterval& range);

// Sum of log f_q(x) / f~(x) with f~ the LCM slopes of q.
double numeraire_eprocess(const Pmf& q, std::span<const std::int64_t> obs);

// Half-width W of a window around the observed range outside which no theta
// can have J_n(theta) > tau (tau > 1).
std::int64_t scan_half_width(std::uint64_t n, double tau);

double log_add(double a, double b);

}  // namespace evshape
