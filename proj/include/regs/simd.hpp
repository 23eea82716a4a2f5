#pragma once

// Data-parallel inner loops shared by the dense linear algebra and the
// neighbor search. Every kernel has a portable scalar reference and an
// AVX2/FMA variant; the variant is picked once at startup from CPUID and
// can be pinned with REGS_SIMD=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace regs::simd {

enum class Isa { scalar, avx2 };

struct Kernels {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = sum_k (cols[k][i] - query[k])^2 for i < count; cols is SoA.
  void (*sq_dist)(const double* const* cols, std::size_t dim, std::size_t count,
                  const double* query, double* out);
  // out[i] = sum_k (cols[k][idx[i]] - query[k])^2, indexed gather variant.
  void (*sq_dist_indexed)(const double* const* cols, std::size_t dim,
                          const std::size_t* idx, std::size_t count,
                          const double* query, double* out);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sq_dist(const double* const* cols, std::size_t dim, std::size_t count,
             const double* query, double* out);
void sq_dist_indexed(const double* const* cols, std::size_t dim,
                     const std::size_t* idx, std::size_t count,
                     const double* query, double* out);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sq_dist(const double* const* cols, std::size_t dim, std::size_t count,
             const double* query, double* out);
void sq_dist_indexed(const double* const* cols, std::size_t dim,
                     const std::size_t* idx, std::size_t count,
                     const double* query, double* out);
}  // namespace avx2

bool cpu_has_avx2();

const Kernels& kernels_for(Isa isa);

// Process-wide table, resolved on first use.
const Kernels& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace regs::simd
