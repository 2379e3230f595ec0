#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evshape/pmf.hpp"

namespace evshape {

inline constexpr double kPolarTol = 1e-9;

// A nonnegative function on Z: a table on [lo, lo + values.size()) plus
// constants to the left and right of it.
struct EvalFn {
  std::int64_t lo = 0;
  std::vector<double> values;
  double left_tail = 1.0;
  double right_tail = 1.0;

  static EvalFn constant(double c) { return {0, {}, c, c}; }

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(values.size()) - 1; }
  double at(std::int64_t n) const;
};

struct WaveletParams {
  std::int64_t m = 0;
  double lambda = 0.0;
};

// Shifting sequences; eta is empty in the monotone case.
struct PolarCertificate {
  std::vector<double> rho;
  std::vector<double> eta;
};

double wavelet_lambda(double f_m, double f_m1);
WaveletParams wavelet_params(const Pmf& q, std::int64_t m);

// 1 - lambda at m, 1 + lambda at m + 1, 1 elsewhere.
EvalFn wavelet_at(std::int64_t m, double lambda);
EvalFn wavelet_evalue(const Pmf& q, std::int64_t m);

double expectation(const EvalFn& e, const Pmf& p);
double expectation(const EvalFn& e, const MassFunction& p);
double epower(const EvalFn& e, const Pmf& q);
double epower_lower_bound(const Pmf& q, std::int64_t m);

bool is_in_polar_M(const EvalFn& e);
bool is_in_polar_D(const EvalFn& e, std::int64_t theta);

// Partial sums rho_n = e(0) + ... + e(n-1) over the window plus one step.
PolarCertificate certificate_M(const EvalFn& e);
// rho_n and eta_n around theta, each extended one step past the table.
PolarCertificate certificate_D(const EvalFn& e, std::int64_t theta);

// Inverse of certificate_M: e(n) = rho_{n+1} - rho_n with rho_0 = 0, tail 1.
// A non-decreasing rho with rho_n <= n gives a member of the polar.
EvalFn evalue_from_rho(std::span<const double> rho);

EvalFn xq_evalue(const Pmf& q);
bool is_xq_form(const EvalFn& e);

EvalFn witness(const Pmf& q, std::optional<std::int64_t> theta = std::nullopt);

}  // namespace evshape
