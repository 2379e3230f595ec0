#include "evshape/pmf.hpp"

#include <algorithm>
#include <cmath>

#include "evshape/error.hpp"

namespace evshape {

Pmf::Pmf() : lo_(0), masses_{1.0}, is_sub_(false), total_(1.0), cum_{1.0} {}

Pmf Pmf::make(std::int64_t lo, std::vector<double> masses, bool is_sub) {
  double total = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] >= 0.0) || !std::isfinite(masses[i]))
      throw Error(ErrorCode::NegativeMass,
                  "mass at " + std::to_string(lo + static_cast<std::int64_t>(i)) + " is " +
                      std::to_string(masses[i]));
    total += masses[i];
  }
  if (total > 1.0 + kSubMassTol)
    throw Error(ErrorCode::MassSumViolation, "total mass " + std::to_string(total) + " > 1");
  if (!is_sub && std::abs(total - 1.0) > kProbMassTol)
    throw Error(ErrorCode::MassSumViolation, "total mass " + std::to_string(total) + " != 1");

  std::size_t first = 0, last = masses.size();
  while (first < last && masses[first] == 0.0) ++first;
  while (last > first && masses[last - 1] == 0.0) --last;

  Pmf p;
  p.lo_ = first < last ? lo + static_cast<std::int64_t>(first) : lo;
  p.masses_.assign(masses.begin() + static_cast<std::ptrdiff_t>(first),
                   masses.begin() + static_cast<std::ptrdiff_t>(last));
  p.is_sub_ = is_sub;
  p.cum_.resize(p.masses_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.masses_.size(); ++i) p.cum_[i] = acc += p.masses_[i];
  p.total_ = acc;
  return p;
}

Pmf Pmf::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::BadInterval, "uniform with hi < lo");
  const auto k = static_cast<std::size_t>(hi - lo + 1);
  return make(lo, std::vector<double>(k, 1.0 / static_cast<double>(k)), false);
}

double Pmf::at(std::int64_t n) const {
  if (n < lo_ || n > hi()) return 0.0;
  return masses_[static_cast<std::size_t>(n - lo_)];
}

double Pmf::cdf(std::int64_t n) const {
  if (n < lo_ || masses_.empty()) return 0.0;
  if (n >= hi()) return total_;
  return cum_[static_cast<std::size_t>(n - lo_)];
}

Pmf make_pmf(std::int64_t lo, std::vector<double> masses, bool is_sub) {
  return Pmf::make(lo, std::move(masses), is_sub);
}

bool is_monotone(const Pmf& p) {
  if (p.lo() < 0) throw Error(ErrorCode::NegativeSupport, "is_monotone needs lo >= 0");
  for (std::int64_t n = 0; n <= p.hi(); ++n)
    if (p.at(n + 1) > p.at(n) + kShapeTol) return false;
  return true;
}

bool is_theta_unimodal(const Pmf& p, std::int64_t theta) {
  if (p.is_zero()) return true;
  // Only pairs touching the window can violate either side.
  for (std::int64_t n = p.lo() - 1; n <= p.hi(); ++n) {
    const double a = p.at(n), b = p.at(n + 1);
    if (n + 1 <= theta && a > b + kShapeTol) return false;
    if (n >= theta && b > a + kShapeTol) return false;
  }
  return true;
}

ModeInterval mode_set(const Pmf& p) {
  if (p.is_zero()) return ModeInterval::all();
  std::int64_t first = 0, last = 0;
  bool any = false;
  for (std::int64_t t = p.lo() - 1; t <= p.hi() + 1; ++t) {
    if (!is_theta_unimodal(p, t)) continue;
    if (!any) first = t;
    last = t;
    any = true;
  }
  return any ? ModeInterval::range(first, last) : ModeInterval::empty();
}

bool satisfies_basic_inequality(const Pmf& p) {
  if (p.lo() < 0) throw Error(ErrorCode::NegativeSupport, "basic inequality needs lo >= 0");
  for (std::int64_t n = p.lo(); n <= p.hi(); ++n)
    if (p.at(n) > 1.0 / static_cast<double>(n + 1) + kShapeTol) return false;
  return true;
}

Pmf empirical(std::span<const std::int64_t> obs) {
  if (obs.empty()) throw Error(ErrorCode::EmptyObservations, "empirical of no observations");
  const auto [mn, mx] = std::minmax_element(obs.begin(), obs.end());
  std::vector<double> counts(static_cast<std::size_t>(*mx - *mn + 1), 0.0);
  for (auto x : obs) counts[static_cast<std::size_t>(x - *mn)] += 1.0;
  const double n = static_cast<double>(obs.size());
  for (auto& c : counts) c /= n;
  return Pmf::make(*mn, std::move(counts), false);
}

double MassFunction::at(std::int64_t n) const {
  if (n < lo || n >= lo + static_cast<std::int64_t>(masses.size())) return 0.0;
  return masses[static_cast<std::size_t>(n - lo)];
}

MassFunction monotone_envelope(const Pmf& p) {
  if (p.lo() < 0) throw Error(ErrorCode::NegativeSupport, "monotone envelope needs lo >= 0");
  MassFunction out;
  out.lo = 0;
  if (p.is_zero()) return out;
  out.masses.assign(static_cast<std::size_t>(p.hi() + 1), 0.0);
  double run = 0.0;
  for (std::int64_t n = p.hi(); n >= 0; --n) {
    run = std::max(run, p.at(n));
    out.masses[static_cast<std::size_t>(n)] = run;
  }
  for (double m : out.masses) out.total += m;
  return out;
}

MassFunction unimodal_envelope(const Pmf& p, std::int64_t theta) {
  MassFunction out;
  if (p.is_zero()) return out;
  const std::int64_t lo = std::min(p.lo(), theta);
  const std::int64_t hi = std::max(p.hi(), theta);
  out.lo = lo;
  out.masses.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  auto slot = [&](std::int64_t n) -> double& { return out.masses[static_cast<std::size_t>(n - lo)]; };
  double run = 0.0;
  for (std::int64_t n = lo; n < theta; ++n) slot(n) = run = std::max(run, p.at(n));
  run = 0.0;
  for (std::int64_t n = hi; n > theta; --n) slot(n) = run = std::max(run, p.at(n));
  slot(theta) = *std::max_element(p.masses().begin(), p.masses().end());
  for (double m : out.masses) out.total += m;
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Sampler::Sampler(const Pmf& p) : lo_(p.lo()) {
  if (p.is_sub()) throw Error(ErrorCode::SubprobabilitySampling, "cannot sample a sub-probability");
  cum_.resize(p.masses().size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cum_.size(); ++i) cum_[i] = acc += p.masses()[i];
  for (auto& c : cum_) c /= acc;
  cum_.back() = 1.0;
}

std::int64_t Sampler::operator()(std::mt19937_64& rng) const {
  const double u = u01(rng);
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return lo_ + static_cast<std::int64_t>(it - cum_.begin());
}

std::vector<std::int64_t> sample(const Pmf& p, std::uint64_t seed, std::size_t n) {
  Sampler draw(p);
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = draw(rng);
  return out;
}

}  // namespace evshape
