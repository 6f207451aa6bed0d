#include <cmath>

#include "itables/simd/kernels.hpp"

namespace itables::simd {

namespace {

void rf_codes_scalar(const double* points, size_t n, size_t d, const int32_t* dims,
                     const double* cuts, size_t l, uint32_t* codes) {
  for (size_t i = 0; i < n; ++i) {
    const double* row = points + i * d;
    uint32_t code = 0;
    for (size_t j = 0; j < l; ++j) {
      code |= static_cast<uint32_t>(row[dims[j]] >= cuts[j]) << j;
    }
    codes[i] = code;
  }
}

double weighted_l1_scalar(const double* x, const double* q, const double* weight,
                          size_t d) {
  double acc = 0.0;
  for (size_t i = 0; i < d; ++i) {
    acc += std::fabs(x[i] - q[i]) * weight[i];
  }
  return acc;
}

double dot_scalar(const double* x, const double* a, size_t d) {
  double acc = 0.0;
  for (size_t i = 0; i < d; ++i) {
    acc += x[i] * a[i];
  }
  return acc;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet kernels{"scalar", rf_codes_scalar, weighted_l1_scalar,
                                 dot_scalar};
  return kernels;
}

}  // namespace itables::simd
