#include <cstdlib>
#include <string>

#include "regs/simd.hpp"

namespace regs::simd {

namespace {

constexpr Kernels kScalar{&scalar::dot, &scalar::axpy, &scalar::sq_dist,
                          &scalar::sq_dist_indexed};
constexpr Kernels kAvx2{&avx2::dot, &avx2::axpy, &avx2::sq_dist,
                        &avx2::sq_dist_indexed};

Isa resolve() {
  const bool avx2_ok = cpu_has_avx2();
  if (const char* env = std::getenv("REGS_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && avx2_ok) return Isa::avx2;
  }
  return avx2_ok ? Isa::avx2 : Isa::scalar;
}

}  // namespace

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& kernels_for(Isa isa) {
  return isa == Isa::avx2 ? kAvx2 : kScalar;
}

Isa active_isa() {
  static const Isa isa = resolve();
  return isa;
}

const Kernels& active() { return kernels_for(active_isa()); }

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace regs::simd
