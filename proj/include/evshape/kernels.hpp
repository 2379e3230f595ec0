#pragma once

// Data-parallel reductions used on the hot paths (expectations, e-powers and
// mixture log-sum-exps). Each kernel has a scalar reference implementation and,
// on x86-64, an AVX2+FMA variant. The variant is chosen once at runtime from the
// CPU feature bits; set EVSHAPE_SIMD=scalar to force the reference path.
//
// The two variants agree to within a few ulps, not bit-for-bit: the vector path
// reassociates sums and uses its own exp/log polynomials.

#include <span>
#include <string_view>

namespace evshape::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// The variant currently used by the dispatching entry points below.
Isa active_isa();

// Overrides the runtime choice. Intended for tests and benchmarks; requesting an
// unavailable variant falls back to Scalar. Not synchronised with concurrent
// kernel calls.
void set_active_isa(Isa isa);

// sum_i a[i] * b[i]; the spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b);

// sum over {i : w[i] > 0} of w[i] * log(v[i]). Returns -inf as soon as some
// positive weight meets v[i] == 0.
double xlogy_sum(std::span<const double> w, std::span<const double> v);

// log sum_i exp(terms[i] + log_first + i * log_ratio), computed with a max shift.
// Returns -inf for an empty span or when every term is -inf.
double geometric_lse(std::span<const double> terms, double log_first, double log_ratio);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double xlogy_sum(std::span<const double> w, std::span<const double> v);
double geometric_lse(std::span<const double> terms, double log_first, double log_ratio);
}  // namespace scalar

#if defined(EVSHAPE_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double xlogy_sum(std::span<const double> w, std::span<const double> v);
double geometric_lse(std::span<const double> terms, double log_first, double log_ratio);

// Elementwise helpers, exposed so the polynomial approximations can be checked
// against libm directly. exp_n flushes arguments below about -708 to 0; log_n
// requires positive normal finite inputs.
void exp_n(std::span<const double> in, std::span<double> out);
void log_n(std::span<const double> in, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace evshape::kernels
