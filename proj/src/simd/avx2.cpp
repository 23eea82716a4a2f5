// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include "regs/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define REGS_HAVE_AVX2_TU 1
#endif

namespace regs::simd::avx2 {

#if REGS_HAVE_AVX2_TU

namespace {
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void sq_dist(const double* const* cols, std::size_t dim, std::size_t count,
             const double* query, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(cols[k] + i), _mm256_set1_pd(query[k]));
      acc = _mm256_fmadd_pd(t, t, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double t = cols[k][i] - query[k];
      s += t * t;
    }
    out[i] = s;
  }
}

void sq_dist_indexed(const double* const* cols, std::size_t dim,
                     const std::size_t* idx, std::size_t count,
                     const double* query, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i vi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d c = _mm256_i64gather_pd(cols[k], vi, 8);
      const __m256d t = _mm256_sub_pd(c, _mm256_set1_pd(query[k]));
      acc = _mm256_fmadd_pd(t, t, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double t = cols[k][idx[i]] - query[k];
      s += t * t;
    }
    out[i] = s;
  }
}

#else

double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
void sq_dist(const double* const* cols, std::size_t dim, std::size_t count,
             const double* query, double* out) {
  scalar::sq_dist(cols, dim, count, query, out);
}
void sq_dist_indexed(const double* const* cols, std::size_t dim,
                     const std::size_t* idx, std::size_t count,
                     const double* query, double* out) {
  scalar::sq_dist_indexed(cols, dim, idx, count, query, out);
}

#endif

}  // namespace regs::simd::avx2
