// Compiled with -mavx2 -mfma; only reached through the dispatch table after
// a runtime CPU check.

#include "sparse_ridge/kernels.hpp"

#include <immintrin.h>

namespace sridge::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 15 < n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 3 < n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 7 < n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 3 < n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Four columns per pass so each load of w is reused four times.
void gemv_t_avx2(const double* a, std::size_t ld, std::size_t n, std::size_t p,
                 const double* w, double* out) {
  std::size_t j = 0;
  for (; j + 3 < p; j += 4) {
    const double* c0 = a + j * ld;
    const double* c1 = c0 + ld;
    const double* c2 = c1 + ld;
    const double* c3 = c2 + ld;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 3 < n; i += 4) {
      const __m256d wv = _mm256_loadu_pd(w + i);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(c0 + i), wv, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(c1 + i), wv, s1);
      s2 = _mm256_fmadd_pd(_mm256_loadu_pd(c2 + i), wv, s2);
      s3 = _mm256_fmadd_pd(_mm256_loadu_pd(c3 + i), wv, s3);
    }
    double r0 = hsum(s0), r1 = hsum(s1), r2 = hsum(s2), r3 = hsum(s3);
    for (; i < n; ++i) {
      r0 += c0[i] * w[i];
      r1 += c1[i] * w[i];
      r2 += c2[i] * w[i];
      r3 += c3[i] * w[i];
    }
    out[j] = r0;
    out[j + 1] = r1;
    out[j + 2] = r2;
    out[j + 3] = r3;
  }
  for (; j < p; ++j) out[j] = dot_avx2(a + j * ld, w, n);
}

void rank1_columns_avx2(double* a, std::size_t ld, std::size_t n, std::size_t p,
                        const double* w, const double* coef) {
  for (std::size_t j = 0; j < p; ++j) axpy_avx2(-coef[j], w, a + j * ld, n);
}

}  // namespace

namespace detail {
const KernelTable avx2_table{dot_avx2, axpy_avx2, gemv_t_avx2, rank1_columns_avx2};
}

}  // namespace sridge::kernels
