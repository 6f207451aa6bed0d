#pragma once

#include <cstdint>
#include <vector>

#include "itables/dataset.hpp"
#include "itables/rng.hpp"

namespace itables {

// Per-dimension ranges of a point set. Dimensions with min == max carry no
// distance information and are excluded from sampling and from the weighted
// l1 distance.
struct FeatureStats {
  std::vector<double> min;
  std::vector<double> max;
  std::vector<uint8_t> degenerate;
  std::vector<int32_t> active_dims;  // indices of non-degenerate dimensions
  std::vector<double> weight;        // 1/(max-min); 0 on degenerate dimensions

  size_t dim() const { return min.size(); }
  size_t active_count() const { return active_dims.size(); }
};

FeatureStats compute_feature_stats(const double* points, size_t n, size_t d);
FeatureStats compute_feature_stats(const Dataset& data);

// Threshold hash on one feature: returns 1 iff x[dim] >= cut.
struct RfHashFunction {
  int32_t dim;
  double cut;
};

inline int rf_hash(const RfHashFunction& h, const double* x) {
  return x[h.dim] >= h.cut ? 1 : 0;
}

// Concatenation of l feature-threshold hashes; code(x) in [0, 2^l).
// Stored as parallel arrays so batch evaluation can vectorize.
struct CompositeHash {
  std::vector<int32_t> dims;
  std::vector<double> cuts;

  size_t l() const { return dims.size(); }
};

inline constexpr int kMaxHashCount = 20;

uint32_t composite_code(const CompositeHash& g, const double* x);

// Batch form over a row-major n x d matrix; uses the active SIMD kernel.
// Bit-identical to composite_code on every row.
void composite_codes(const CompositeHash& g, const double* points, size_t n,
                     size_t d, uint32_t* out);

// Per-base-model knobs: scaling f, hash count l, subsample size s, and the
// seed of the model's random stream. l is drawn from
// U[1 + 0.5*log_b(s), log_b(s)] with b = max(2, 1/f), rounded to nearest and
// clamped to [1, kMaxHashCount].
struct BaseModelParams {
  double f;
  int l;
  int s;
  uint64_t seed;
};

BaseModelParams sample_base_params(int s, Rng& rng);

// l feature-threshold hashes with dimensions drawn uniformly with
// replacement from the non-degenerate dimensions and cuts uniform in the
// dimension's range.
CompositeHash sample_rf_composite(const FeatureStats& stats, int l, Rng& rng);

// Weighted l1 distance: sum_i |x_i - q_i| / (max_i - min_i) over
// non-degenerate dimensions.
double weighted_l1(const double* x, const double* q, const FeatureStats& stats);

// Collision probability of one feature-threshold hash on the pair (x, q):
// 1 - (1/d') * sum of per-dimension terms, each term clamped to [0, 1] so
// points outside the stats range stay well-defined.
double rf_collision_prob(const double* x, const double* q,
                         const FeatureStats& stats);

// p-stable projection hash floor((x.a + b) / w) with a ~ N(0,1)^d and
// b ~ U[0, w].
struct RpHashFunction {
  std::vector<double> a;
  double b;
  double w;
};

RpHashFunction sample_rp_hash(size_t d, double w, Rng& rng);
int64_t rp_hash(const RpHashFunction& h, const double* x, size_t d);

// Per-dimension quantizer of the randomized-subspace baseline:
// floor(((x - min)/(max - min) + alpha) / f). Throws on min == max.
int64_t rsh_quantize(double x, double min_v, double max_v, double alpha,
                     double f);

}  // namespace itables
