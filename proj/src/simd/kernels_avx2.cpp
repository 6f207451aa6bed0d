// AVX2 kernel variants. This translation unit is compiled with -mavx2 -mfma;
// it must only be reached through the runtime dispatch in kernels.cpp.

#include "itables/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace itables::simd {

namespace {

constexpr size_t kMaxL = 24;

// One composite hash over a batch of points. Vectorized across the l hash
// functions: gather the selected coordinates of the row, compare against the
// cut values, pack the sign bits into the bucket code.
void rf_codes_avx2(const double* points, size_t n, size_t d, const int32_t* dims,
                   const double* cuts, size_t l, uint32_t* codes) {
  if (l > kMaxL) {  // oversized hash lists take the scalar path
    scalar_kernels().rf_codes(points, n, d, dims, cuts, l, codes);
    return;
  }
  // Pad to a multiple of 4 with an always-false comparison (x >= +inf).
  alignas(16) int32_t pdims[kMaxL];
  alignas(32) double pcuts[kMaxL];
  size_t lp = (l + 3) & ~size_t{3};
  for (size_t j = 0; j < l; ++j) {
    pdims[j] = dims[j];
    pcuts[j] = cuts[j];
  }
  for (size_t j = l; j < lp; ++j) {
    pdims[j] = 0;
    pcuts[j] = std::numeric_limits<double>::infinity();
  }

  for (size_t i = 0; i < n; ++i) {
    const double* row = points + i * d;
    uint32_t code = 0;
    for (size_t j = 0; j < lp; j += 4) {
      __m128i idx = _mm_load_si128(reinterpret_cast<const __m128i*>(pdims + j));
      __m256d x = _mm256_i32gather_pd(row, idx, 8);
      __m256d c = _mm256_load_pd(pcuts + j);
      __m256d ge = _mm256_cmp_pd(x, c, _CMP_GE_OQ);
      code |= static_cast<uint32_t>(_mm256_movemask_pd(ge)) << j;
    }
    codes[i] = code;
  }
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double weighted_l1_avx2(const double* x, const double* q, const double* weight,
                        size_t d) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(q + i));
    diff = _mm256_and_pd(diff, abs_mask);
    acc = _mm256_fmadd_pd(diff, _mm256_loadu_pd(weight + i), acc);
  }
  double total = hsum(acc);
  for (; i < d; ++i) {
    total += std::fabs(x[i] - q[i]) * weight[i];
  }
  return total;
}

double dot_avx2(const double* x, const double* a, size_t d) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(a + i), acc);
  }
  double total = hsum(acc);
  for (; i < d; ++i) {
    total += x[i] * a[i];
  }
  return total;
}

}  // namespace

const KernelSet& avx2_kernels() {
  static const KernelSet kernels{"avx2", rf_codes_avx2, weighted_l1_avx2, dot_avx2};
  return kernels;
}

}  // namespace itables::simd

#endif  // x86_64
