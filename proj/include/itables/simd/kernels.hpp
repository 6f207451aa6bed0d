#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace itables::simd {

// Data-parallel inner loops behind the detectors. Each kernel has a scalar
// reference implementation and optional vectorized variants; the variant is
// picked once at startup based on CPU capability (override with
// ITABLES_SIMD=scalar|avx2). rf_codes is bit-exact across variants since it
// is pure comparison-and-pack; the float reductions may differ in the last
// ulps between variants.
struct KernelSet {
  const char* name;

  // codes[i] = sum_j ((points[i*d + dims[j]] >= cuts[j]) << j) for j in [0, l).
  // l <= 24. points is row-major n x d.
  void (*rf_codes)(const double* points, size_t n, size_t d, const int32_t* dims,
                   const double* cuts, size_t l, uint32_t* codes);

  // sum_i |x[i] - q[i]| * weight[i]
  double (*weighted_l1)(const double* x, const double* q, const double* weight,
                        size_t d);

  // sum_i x[i] * a[i]
  double (*dot)(const double* x, const double* a, size_t d);
};

const KernelSet& scalar_kernels();

// Variant selected at runtime; falls back to scalar.
const KernelSet& active();

// All variants usable on this machine, scalar first. For equivalence tests
// and benchmarks.
std::vector<const KernelSet*> available();

}  // namespace itables::simd
