#include "regs/simd.hpp"

namespace regs::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void sq_dist(const double* const* cols, std::size_t dim, std::size_t count,
             const double* query, double* out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double* c = cols[k];
    const double qk = query[k];
    for (std::size_t i = 0; i < count; ++i) {
      const double t = c[i] - qk;
      out[i] += t * t;
    }
  }
}

void sq_dist_indexed(const double* const* cols, std::size_t dim,
                     const std::size_t* idx, std::size_t count,
                     const double* query, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double t = cols[k][idx[i]] - query[k];
      s += t * t;
    }
    out[i] = s;
  }
}

}  // namespace regs::simd::scalar
