#pragma once

#include <vector>

namespace evshape {

// Piecewise-constant function on [0, inf), left-continuous: levels[i] is the
// value on (breakpoints[i], breakpoints[i+1]]. breakpoints.front() is 0.
struct StepFn {
  std::vector<double> breakpoints{0.0};
  std::vector<double> levels;
  double value_at_0 = 0.0;
  double tail_level = 0.0;

  double at(double x) const;
  // Throws BadInterval on malformed breakpoints or negative levels.
  void validate() const;
};

// A step density plus an atom at 0. density.value_at_0 is unused.
struct StepDensity {
  double atom0 = 0.0;
  StepFn density;

  double total() const;
  double cdf(double x) const;
  void validate() const;
};

// Piecewise-linear function a_i + b_i x on the same left-continuous layout.
// Holds x q(x) for a step density q without losing exactness.
struct PiecewiseLinear {
  std::vector<double> breakpoints{0.0};
  std::vector<double> intercepts;
  std::vector<double> slopes;
  double value_at_0 = 0.0;
  double tail_level = 0.0;

  double at(double x) const;
  static PiecewiseLinear from(const StepFn& f);
};

StepFn bump_evalue(double a, double b);
PiecewiseLinear xq_evalue_cont(const StepDensity& q);

// int_0^x e <= x for all x >= 0, tail at most 1, and with the jump guard
// value_at_0 <= 1.
bool is_in_polar_U(const PiecewiseLinear& e, bool require_jump_guard);
bool is_in_polar_U(const StepFn& e, bool require_jump_guard);

double expectation(const PiecewiseLinear& e, const StepDensity& p);
double expectation(const StepFn& e, const StepDensity& p);
// May be -inf.
double epower(const PiecewiseLinear& e, const StepDensity& q);
double epower(const StepFn& e, const StepDensity& q);

// The bandwidth-w mixture of bumps weighted by q, evaluated at x.
double xq_mixture_bandwidth(const StepDensity& q, double x, double w);

double edelman_pvalue(double x, double a);

struct RealInterval {
  enum class Kind { Empty, Open, Singleton, AllReals };
  Kind kind = Kind::Empty;
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const;
  // Infinity for AllReals, 0 for Empty and Singleton.
  double width() const;
};

RealInterval edelman_ci(double x, double alpha, double phi);
RealInterval cont_mode_ci(double x, double alpha, double phi);

// Majorant density of the CDF (atom at 0 kept) and the ratio q / majorant.
StepDensity lcm_cont(const StepDensity& q);
StepFn numeraire_cont(const StepDensity& q);

}  // namespace evshape
