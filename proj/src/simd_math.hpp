#pragma once

// Internal hot-loop helpers. The model is tiny but the finite-difference
// oracle evaluates the full forward pass ~600k times, so the dense/conv dot
// products and the transcendental sweeps need to run at vector speed.
// Everything falls back to plain scalar code off x86-64/glibc.

#include <cmath>
#include <cstddef>

#if defined(SOCIALPEC_HAVE_LIBMVEC) && defined(__AVX2__)
#include <immintrin.h>
extern "C" {
__m256d _ZGVdN4v_tanh(__m256d);
__m256d _ZGVdN4v_log(__m256d);
}
#define SOCIALPEC_SIMD 1
#endif

namespace socialpec {
namespace detail {

// Fixed-order blocked reduction; the lane split keeps the compiler free to
// vectorize without reassociating a single serial chain.
inline double dot(const double* a, const double* b, std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  double acc4 = 0.0, acc5 = 0.0, acc6 = 0.0, acc7 = 0.0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 += a[i] * b[i];
    acc1 += a[i + 1] * b[i + 1];
    acc2 += a[i + 2] * b[i + 2];
    acc3 += a[i + 3] * b[i + 3];
    acc4 += a[i + 4] * b[i + 4];
    acc5 += a[i + 5] * b[i + 5];
    acc6 += a[i + 6] * b[i + 6];
    acc7 += a[i + 7] * b[i + 7];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return (((acc0 + acc4) + (acc1 + acc5)) + ((acc2 + acc6) + (acc3 + acc7))) + tail;
}

inline void vec_tanh(const double* in, double* out, std::size_t n) {
  std::size_t i = 0;
#ifdef SOCIALPEC_SIMD
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _ZGVdN4v_tanh(_mm256_loadu_pd(in + i)));
  }
#endif
  for (; i < n; ++i) out[i] = std::tanh(in[i]);
}

// out[i] = log(shift + in[i])
inline void vec_log_shifted(const double* in, double shift, double* out, std::size_t n) {
  std::size_t i = 0;
#ifdef SOCIALPEC_SIMD
  const __m256d vshift = _mm256_set1_pd(shift);
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _ZGVdN4v_log(_mm256_add_pd(_mm256_loadu_pd(in + i), vshift)));
  }
#endif
  for (; i < n; ++i) out[i] = std::log(shift + in[i]);
}

}  // namespace detail
}  // namespace socialpec
