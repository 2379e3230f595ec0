#pragma once

#include <cstdint>
#include <optional>

#include "evshape/eprocess.hpp"
#include "evshape/intset.hpp"
#include "evshape/pmf.hpp"

namespace evshape {

// Slack added to log thresholds so that values equal to the threshold up to
// rounding do not count as exceeding it.
inline constexpr double kLogThresholdTol = 1e-12;

ModeInterval one_obs_ci(std::int64_t x, double alpha, std::int64_t phi);
ModeInterval one_obs_ci_finite(std::int64_t x, double alpha, std::int64_t phi);

struct ConfidenceSet {
  IntSet rejected;
  // Region outside which nothing can be rejected; Empty before any data.
  ModeInterval window;

  IntSet weak() const { return rejected.complement(); }
};

// Rejected set {theta : J_n(theta) > tau}. tau > 1 gives a bounded window.
ConfidenceSet rejected_above(const UnimodalFamily& family, double tau);
// Threshold 1/alpha.
ConfidenceSet confidence_set(const UnimodalFamily& family, double alpha);
ModeInterval strong_hull(const IntSet& weak);
// {theta : J_n(theta) <= n^2}; all of Z before any data.
IntSet mode_estimate(const UnimodalFamily& family);

// Exact one-observation coverage of one_obs_ci under p.
struct Coverage {
  double weak = 0.0;    // min over modes theta of P(theta in CI(X))
  double strong = 0.0;  // P(every mode in CI(X))
};
Coverage one_obs_coverage(const Pmf& p, double alpha, std::int64_t phi);

enum class Decision { Continue, Reject };

// Two-step power-one test of unimodality with an unknown mode: the first
// observation fixes a finite candidate range, the rest feed the theta-unimodal
// processes, and the test rejects once all of them reach 3/alpha.
class UnrestrictedModeTest {
 public:
  enum class Phase { AwaitingFirst, Running, Rejected };

  UnrestrictedModeTest(double alpha, std::int64_t phi);

  Decision step(std::int64_t x);

  Phase phase() const { return phase_; }
  std::uint64_t n() const { return n_; }
  const ModeInterval& candidates() const { return candidates_; }
  std::optional<std::uint64_t> rejected_at() const { return rejected_at_; }
  const UnimodalFamily& family() const { return family_; }
  // log of the minimum over candidates; 0 before the second observation.
  double log_value() const;

 private:
  double alpha_;
  std::int64_t phi_;
  Phase phase_ = Phase::AwaitingFirst;
  std::uint64_t n_ = 0;
  ModeInterval candidates_;
  UnimodalFamily family_;
  std::optional<std::uint64_t> rejected_at_;
};

}  // namespace evshape
