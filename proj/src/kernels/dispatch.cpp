#include <atomic>
#include <cstdlib>
#include <cstring>

#include "evshape/kernels.hpp"

namespace evshape::kernels {
namespace {

Isa detect() {
#if defined(EVSHAPE_HAVE_AVX2)
  if (const char* env = std::getenv("EVSHAPE_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return Isa::Scalar;
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

inline Isa current() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(EVSHAPE_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current(); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::Scalar;
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
#if defined(EVSHAPE_HAVE_AVX2)
  if (current() == Isa::Avx2) return avx2::dot(a, b);
#endif
  return scalar::dot(a, b);
}

double xlogy_sum(std::span<const double> w, std::span<const double> v) {
#if defined(EVSHAPE_HAVE_AVX2)
  if (current() == Isa::Avx2) return avx2::xlogy_sum(w, v);
#endif
  return scalar::xlogy_sum(w, v);
}

double geometric_lse(std::span<const double> terms, double log_first, double log_ratio) {
#if defined(EVSHAPE_HAVE_AVX2)
  if (current() == Isa::Avx2) return avx2::geometric_lse(terms, log_first, log_ratio);
#endif
  return scalar::geometric_lse(terms, log_first, log_ratio);
}

}  // namespace evshape::kernels
