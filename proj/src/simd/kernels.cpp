#include "itables/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace itables::simd {

#if defined(__x86_64__) || defined(_M_X64)
const KernelSet& avx2_kernels();  // defined in kernels_avx2.cpp
#endif

namespace {

const KernelSet* select() {
  const char* forced = std::getenv("ITABLES_SIMD");
  if (forced && std::strcmp(forced, "scalar") == 0) return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
  bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (forced && std::strcmp(forced, "avx2") == 0 && cpu_ok) return &avx2_kernels();
  if (!forced && cpu_ok) return &avx2_kernels();
#endif
  return &scalar_kernels();
}

}  // namespace

const KernelSet& active() {
  static const KernelSet* chosen = select();
  return *chosen;
}

std::vector<const KernelSet*> available() {
  std::vector<const KernelSet*> sets{&scalar_kernels()};
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    sets.push_back(&avx2_kernels());
  }
#endif
  return sets;
}

}  // namespace itables::simd
