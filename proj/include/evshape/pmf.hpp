#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "evshape/intset.hpp"

namespace evshape {

inline constexpr double kShapeTol = 1e-12;
inline constexpr double kSubMassTol = 1e-12;
inline constexpr double kProbMassTol = 1e-9;

// A (sub-)probability mass function on a finite window of Z. Leading and
// trailing zeros are trimmed at construction, so masses().front() and back()
// are positive unless the measure is zero.
class Pmf {
 public:
  // Point mass at 0.
  Pmf();

  static Pmf make(std::int64_t lo, std::vector<double> masses, bool is_sub = false);
  static Pmf point(std::int64_t x) { return make(x, {1.0}, false); }
  static Pmf uniform(std::int64_t lo, std::int64_t hi);

  std::int64_t lo() const { return lo_; }
  // Last index of the window; lo() - 1 for the zero measure.
  std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(masses_.size()) - 1; }
  const std::vector<double>& masses() const { return masses_; }
  bool is_sub() const { return is_sub_; }
  bool is_zero() const { return masses_.empty(); }
  double total() const { return total_; }

  double at(std::int64_t n) const;
  double cdf(std::int64_t n) const;

 private:
  std::int64_t lo_ = 0;
  std::vector<double> masses_;
  bool is_sub_ = false;
  double total_ = 0.0;
  std::vector<double> cum_;
};

Pmf make_pmf(std::int64_t lo, std::vector<double> masses, bool is_sub = false);
inline double cdf(const Pmf& p, std::int64_t n) { return p.cdf(n); }

bool is_monotone(const Pmf& p);
bool is_theta_unimodal(const Pmf& p, std::int64_t theta);
ModeInterval mode_set(const Pmf& p);
bool satisfies_basic_inequality(const Pmf& p);

Pmf empirical(std::span<const std::int64_t> obs);

// Nonnegative masses on a window with no upper bound on the total; envelopes
// land here because their total may exceed one.
struct MassFunction {
  std::int64_t lo = 0;
  std::vector<double> masses;
  double total = 0.0;

  double at(std::int64_t n) const;
  bool is_subprobability() const { return total <= 1.0 + kSubMassTol; }
};

MassFunction monotone_envelope(const Pmf& p);
MassFunction unimodal_envelope(const Pmf& p, std::int64_t theta);

// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
inline double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// splitmix64 finalizer; used to derive per-replication seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Inverse-CDF sampler over a probability Pmf.
class Sampler {
 public:
  explicit Sampler(const Pmf& p);
  std::int64_t operator()(std::mt19937_64& rng) const;

 private:
  std::int64_t lo_;
  std::vector<double> cum_;
};

std::vector<std::int64_t> sample(const Pmf& p, std::uint64_t seed, std::size_t n);

}  // namespace evshape
