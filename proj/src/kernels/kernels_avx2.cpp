#include <immintrin.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

#include "evshape/kernels.hpp"

namespace evshape::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

// Integral-valued doubles in (-2^51, 2^51) <-> int64 via the 1.5 * 2^52 shift.
constexpr double kShift = 6755399441055744.0;

inline __m256i round_to_i64(__m256d n) {
  const __m256d shift = _mm256_set1_pd(kShift);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, shift)),
                          _mm256_castpd_si256(shift));
}

inline __m256d i64_to_pd(__m256i k) {
  const __m256d shift = _mm256_set1_pd(kShift);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(k, _mm256_castpd_si256(shift))),
                       shift);
}

// Cephes-style exp: x = n ln2 + r, exp(r) from a Pade form, 2^n via the
// exponent bits.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000009E0));

  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

  __m256i k = _mm256_add_epi64(round_to_i64(n), _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(k, 52));
  e = _mm256_mul_pd(e, scale);
  return _mm256_andnot_pd(under, e);
}

// Cephes-style log for positive normal finite lanes.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i ex = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1022));
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));
  __m256d e = i64_to_pd(ex);

  const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, _mm256_set1_pd(1.0)));
  m = _mm256_add_pd(m, _mm256_and_pd(small, m));
  m = _mm256_sub_pd(m, _mm256_set1_pd(1.0));

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d p = _mm256_set1_pd(1.01875663804580931796E-4);
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(4.97494994976747001425E-1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(4.70579119878881725854E0));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(1.44989225341610930846E1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(1.79368678507819816313E1));
  p = _mm256_fmadd_pd(p, m, _mm256_set1_pd(7.70838733755885391666E0));
  __m256d q = _mm256_add_pd(m, _mm256_set1_pd(1.12873587189167450590E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(4.52279145837532221105E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(8.29875266912776603211E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(7.11544750618563894466E1));
  q = _mm256_fmadd_pd(q, m, _mm256_set1_pd(2.31251620126765340583E1));

  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), y);
  __m256d out = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), out);
}

}  // namespace

void exp_n(std::span<const double> in, std::span<double> out) {
  assert(in.size() == out.size());
  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4)
    _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_loadu_pd(in.data() + i)));
  if (i < in.size()) {
    alignas(32) double buf[4] = {0, 0, 0, 0};
    for (std::size_t j = i; j < in.size(); ++j) buf[j - i] = in[j];
    _mm256_store_pd(buf, exp_pd(_mm256_load_pd(buf)));
    for (std::size_t j = i; j < in.size(); ++j) out[j] = buf[j - i];
  }
}

void log_n(std::span<const double> in, std::span<double> out) {
  assert(in.size() == out.size());
  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4)
    _mm256_storeu_pd(out.data() + i, log_pd(_mm256_loadu_pd(in.data() + i)));
  if (i < in.size()) {
    alignas(32) double buf[4] = {1, 1, 1, 1};
    for (std::size_t j = i; j < in.size(); ++j) buf[j - i] = in[j];
    _mm256_store_pd(buf, log_pd(_mm256_load_pd(buf)));
    for (std::size_t j = i; j < in.size(); ++j) out[j] = buf[j - i];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double xlogy_sum(std::span<const double> w, std::span<const double> v) {
  assert(w.size() == v.size());
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t n = w.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d tiny = _mm256_set1_pd(std::numeric_limits<double>::min());
  const __m256d huge = _mm256_set1_pd(std::numeric_limits<double>::max());
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w.data() + i);
    __m256d vv = _mm256_loadu_pd(v.data() + i);
    const __m256d pos = _mm256_cmp_pd(wv, zero, _CMP_GT_OQ);
    // Lanes the polynomial cannot take (zero, subnormal, inf, nan) go scalar.
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(vv, tiny, _CMP_GE_OQ),
                                     _mm256_cmp_pd(vv, huge, _CMP_LE_OQ));
    if (_mm256_movemask_pd(_mm256_andnot_pd(ok, pos)) != 0) {
      for (std::size_t j = i; j < i + 4; ++j) {
        if (!(w[j] > 0.0)) continue;
        if (v[j] <= 0.0) return kNegInf;
        tail += w[j] * std::log(v[j]);
      }
      continue;
    }
    vv = _mm256_blendv_pd(one, vv, pos);
    acc = _mm256_fmadd_pd(_mm256_and_pd(pos, wv), log_pd(vv), acc);
  }
  for (; i < n; ++i) {
    if (!(w[i] > 0.0)) continue;
    if (v[i] <= 0.0) return kNegInf;
    tail += w[i] * std::log(v[i]);
  }
  return hsum(acc) + tail;
}

double geometric_lse(std::span<const double> terms, double log_first, double log_ratio) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t n = terms.size();
  const __m256d ratio = _mm256_set1_pd(log_ratio);
  const __m256d step = _mm256_set1_pd(4.0);
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

  __m256d vmax = _mm256_set1_pd(kNegInf);
  __m256d idx = lane;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_fmadd_pd(idx, ratio, _mm256_loadu_pd(terms.data() + i));
    vmax = _mm256_max_pd(vmax, t);
    idx = _mm256_add_pd(idx, step);
  }
  double peak = hmax(vmax);
  for (std::size_t j = i; j < n; ++j)
    peak = std::max(peak, terms[j] + static_cast<double>(j) * log_ratio);
  if (peak == kNegInf) return kNegInf;

  const __m256d shift = _mm256_set1_pd(peak);
  __m256d acc = _mm256_setzero_pd();
  idx = lane;
  for (i = 0; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_fmadd_pd(idx, ratio, _mm256_loadu_pd(terms.data() + i));
    acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(t, shift)));
    idx = _mm256_add_pd(idx, step);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += std::exp(terms[i] + static_cast<double>(i) * log_ratio - peak);
  return peak + std::log(sum) + log_first;
}

}  // namespace evshape::kernels::avx2
