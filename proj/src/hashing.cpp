#include "itables/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "itables/simd/kernels.hpp"

namespace itables {

FeatureStats compute_feature_stats(const double* points, size_t n, size_t d) {
  if (n == 0) throw std::invalid_argument("empty dataset");
  FeatureStats stats;
  stats.min.assign(points, points + d);
  stats.max.assign(points, points + d);
  for (size_t i = 1; i < n; ++i) {
    const double* row = points + i * d;
    for (size_t j = 0; j < d; ++j) {
      stats.min[j] = std::min(stats.min[j], row[j]);
      stats.max[j] = std::max(stats.max[j], row[j]);
    }
  }
  stats.degenerate.resize(d);
  stats.weight.resize(d);
  for (size_t j = 0; j < d; ++j) {
    bool deg = stats.min[j] == stats.max[j];
    stats.degenerate[j] = deg ? 1 : 0;
    stats.weight[j] = deg ? 0.0 : 1.0 / (stats.max[j] - stats.min[j]);
    if (!deg) stats.active_dims.push_back(static_cast<int32_t>(j));
  }
  return stats;
}

FeatureStats compute_feature_stats(const Dataset& data) {
  return compute_feature_stats(data.values.data(), data.n, data.d);
}

uint32_t composite_code(const CompositeHash& g, const double* x) {
  uint32_t code = 0;
  for (size_t j = 0; j < g.l(); ++j) {
    code |= static_cast<uint32_t>(x[g.dims[j]] >= g.cuts[j]) << j;
  }
  return code;
}

void composite_codes(const CompositeHash& g, const double* points, size_t n,
                     size_t d, uint32_t* out) {
  simd::active().rf_codes(points, n, d, g.dims.data(), g.cuts.data(), g.l(), out);
}

BaseModelParams sample_base_params(int s, Rng& rng) {
  if (s < 2) throw std::invalid_argument("subsample too small");
  double f_lo = 1.0 / std::sqrt(static_cast<double>(s));
  double f_hi = 1.0 - f_lo;
  if (f_lo > f_hi) std::swap(f_lo, f_hi);  // only possible for s < 4
  double f = rng.uniform(f_lo, f_hi);
  double base = std::max(2.0, 1.0 / f);
  double log_b_s = std::log(static_cast<double>(s)) / std::log(base);
  double lo = 1.0 + 0.5 * log_b_s;
  double hi = log_b_s;
  double draw = rng.uniform(std::min(lo, hi), std::max(lo, hi));
  int l = static_cast<int>(std::lround(draw));
  l = std::clamp(l, 1, kMaxHashCount);
  return BaseModelParams{f, l, s, 0};
}

CompositeHash sample_rf_composite(const FeatureStats& stats, int l, Rng& rng) {
  if (stats.active_count() == 0) throw std::invalid_argument("constant dataset");
  if (l < 1 || l > kMaxHashCount) throw std::invalid_argument("hash count out of range");
  CompositeHash g;
  g.dims.reserve(l);
  g.cuts.reserve(l);
  for (int j = 0; j < l; ++j) {
    int32_t dim = stats.active_dims[rng.uniform_int(stats.active_count())];
    double cut = rng.uniform(stats.min[dim], stats.max[dim]);
    g.dims.push_back(dim);
    g.cuts.push_back(cut);
  }
  return g;
}

double weighted_l1(const double* x, const double* q, const FeatureStats& stats) {
  return simd::active().weighted_l1(x, q, stats.weight.data(), stats.dim());
}

double rf_collision_prob(const double* x, const double* q,
                         const FeatureStats& stats) {
  if (stats.active_count() == 0) return 1.0;
  double sum = 0.0;
  for (int32_t dim : stats.active_dims) {
    double term = std::fabs(x[dim] - q[dim]) * stats.weight[dim];
    sum += std::min(term, 1.0);
  }
  double p = 1.0 - sum / static_cast<double>(stats.active_count());
  return std::clamp(p, 0.0, 1.0);
}

RpHashFunction sample_rp_hash(size_t d, double w, Rng& rng) {
  if (w <= 0.0) throw std::invalid_argument("interval length must be positive");
  RpHashFunction h;
  h.a.resize(d);
  for (size_t i = 0; i < d; ++i) h.a[i] = rng.normal();
  h.b = rng.uniform(0.0, w);
  h.w = w;
  return h;
}

int64_t rp_hash(const RpHashFunction& h, const double* x, size_t d) {
  double proj = simd::active().dot(x, h.a.data(), d);
  return static_cast<int64_t>(std::floor((proj + h.b) / h.w));
}

int64_t rsh_quantize(double x, double min_v, double max_v, double alpha,
                     double f) {
  if (min_v == max_v) throw std::invalid_argument("degenerate dimension");
  double scaled = (x - min_v) / (max_v - min_v);
  return static_cast<int64_t>(std::floor((scaled + alpha) / f));
}

}  // namespace itables
