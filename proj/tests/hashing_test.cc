#include "itables/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "itables/rng.hpp"

namespace itables {
namespace {

FeatureStats stats_from_rows(std::vector<std::vector<double>> rows) {
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return compute_feature_stats(flat.data(), rows.size(), rows[0].size());
}

TEST(FeatureStats, ExactMinMaxAndDegenerateFlag) {
  FeatureStats s = stats_from_rows({{0, 5}, {2, 5}});
  EXPECT_EQ(s.min[0], 0.0);
  EXPECT_EQ(s.max[0], 2.0);
  EXPECT_EQ(s.min[1], 5.0);
  EXPECT_EQ(s.max[1], 5.0);
  EXPECT_FALSE(s.degenerate[0]);
  EXPECT_TRUE(s.degenerate[1]);
  EXPECT_EQ(s.active_count(), 1u);
}

TEST(FeatureStats, SinglePointAllDegenerate) {
  FeatureStats s = stats_from_rows({{3, 7}});
  EXPECT_EQ(s.min[0], 3.0);
  EXPECT_EQ(s.max[1], 7.0);
  EXPECT_TRUE(s.degenerate[0]);
  EXPECT_TRUE(s.degenerate[1]);
  EXPECT_EQ(s.active_count(), 0u);
}

TEST(FeatureStats, EmptyInputThrows) {
  std::vector<double> empty;
  EXPECT_THROW(compute_feature_stats(empty.data(), 0, 3), std::invalid_argument);
}

TEST(FeatureStats, UniformCubeRangesNearFull) {
  Rng rng(11);
  std::vector<double> pts(100 * 3);
  for (double& v : pts) v = rng.uniform01();
  FeatureStats s = compute_feature_stats(pts.data(), 100, 3);
  for (int j = 0; j < 3; ++j) {
    EXPECT_LE(s.min[j], 0.1);
    EXPECT_GE(s.max[j], 0.9);
  }
}

TEST(RfHash, BoundaryIsGreaterEqual) {
  RfHashFunction h{0, 2.5};
  double at = 2.5, below = 2.0, above = 3.0;
  EXPECT_EQ(rf_hash(h, &at), 1);  // x_i == c_i hashes to 1
  EXPECT_EQ(rf_hash(h, &below), 0);
  EXPECT_EQ(rf_hash(h, &above), 1);
}

TEST(CompositeCode, BitPacking) {
  CompositeHash g;
  g.dims = {0, 0, 0};
  g.cuts = {5.0, 6.0, 7.0};
  double low = 0.0;
  EXPECT_EQ(composite_code(g, &low), 0u);
  double high = 10.0;  // all three bits set
  EXPECT_EQ(composite_code(g, &high), 7u);
}

TEST(CompositeCode, DeterministicOnEqualPoints) {
  Rng rng(12);
  std::vector<double> pts(20 * 4);
  for (double& v : pts) v = rng.uniform(-1.0, 1.0);
  FeatureStats s = compute_feature_stats(pts.data(), 20, 4);
  CompositeHash g = sample_rf_composite(s, 6, rng);
  std::vector<double> x(pts.begin(), pts.begin() + 4);
  std::vector<double> q = x;
  EXPECT_EQ(composite_code(g, x.data()), composite_code(g, q.data()));
}

TEST(CompositeCode, PermutationPreservesPartition) {
  Rng rng(13);
  const size_t n = 50, d = 3;
  std::vector<double> pts(n * d);
  for (double& v : pts) v = rng.uniform01();
  FeatureStats s = compute_feature_stats(pts.data(), n, d);
  CompositeHash g = sample_rf_composite(s, 5, rng);

  CompositeHash perm = g;
  std::reverse(perm.dims.begin(), perm.dims.end());
  std::reverse(perm.cuts.begin(), perm.cuts.end());

  // same grouping of points even though the codes themselves differ
  std::map<uint32_t, std::set<size_t>> by_g, by_perm;
  for (size_t i = 0; i < n; ++i) {
    by_g[composite_code(g, pts.data() + i * d)].insert(i);
    by_perm[composite_code(perm, pts.data() + i * d)].insert(i);
  }
  std::set<std::set<size_t>> parts_g, parts_perm;
  for (auto& [code, group] : by_g) parts_g.insert(group);
  for (auto& [code, group] : by_perm) parts_perm.insert(group);
  EXPECT_EQ(parts_g, parts_perm);
}

TEST(CompositeCodes, BatchMatchesSingle) {
  Rng rng(14);
  const size_t n = 137, d = 9;
  std::vector<double> pts(n * d);
  for (double& v : pts) v = rng.uniform(-3.0, 3.0);
  FeatureStats s = compute_feature_stats(pts.data(), n, d);
  for (int l : {1, 2, 5, 13, 20}) {
    CompositeHash g = sample_rf_composite(s, l, rng);
    std::vector<uint32_t> codes(n);
    composite_codes(g, pts.data(), n, d, codes.data());
    for (size_t i = 0; i < n; ++i) {
      ASSERT_EQ(codes[i], composite_code(g, pts.data() + i * d)) << l << " " << i;
    }
  }
}

TEST(SampleBaseParams, RejectsTinySubsample) {
  Rng rng(15);
  EXPECT_THROW(sample_base_params(1, rng), std::invalid_argument);
}

TEST(SampleBaseParams, SFourForcesTwoHashes) {
  // f interval collapses to {0.5}: base 2, draw interval endpoints coincide
  Rng rng(16);
  for (int i = 0; i < 100; ++i) {
    BaseModelParams p = sample_base_params(4, rng);
    EXPECT_DOUBLE_EQ(p.f, 0.5);
    EXPECT_EQ(p.l, 2);
  }
}

TEST(SampleBaseParams, ThousandPointRanges) {
  // l is the rounded draw from [1 + 0.5*log_b(1000), log_b(1000)]; over all
  // admissible f the pre-rounding value stays in [2, log2(1000) ~ 9.97]
  Rng rng(17);
  bool saw_small = false, saw_large = false;
  for (int i = 0; i < 2000; ++i) {
    BaseModelParams p = sample_base_params(1000, rng);
    EXPECT_GE(p.f, 1.0 / std::sqrt(1000.0));
    EXPECT_LE(p.f, 1.0 - 1.0 / std::sqrt(1000.0));
    EXPECT_GE(p.l, 2);
    EXPECT_LE(p.l, 10);
    saw_small = saw_small || p.l <= 3;
    saw_large = saw_large || p.l >= 9;
  }
  EXPECT_TRUE(saw_small);
  EXPECT_TRUE(saw_large);
}

TEST(SampleBaseParams, MidScalingGivesSixToTen) {
  // f ~ 0.5 -> base 2 -> interval [5.983, 9.966] -> l in {6..10}
  Rng rng(18);
  int seen = 0;
  while (seen < 200) {
    BaseModelParams p = sample_base_params(1000, rng);
    if (p.f < 0.49 || p.f > 0.51) continue;
    ++seen;
    EXPECT_GE(p.l, 6);
    EXPECT_LE(p.l, 10);
  }
}

TEST(SampleBaseParams, ExtremeSmallScalingGivesTwo) {
  // f ~ 1/sqrt(1000) -> base ~ 31.6 -> interval [2.0, 2.0]
  Rng rng(19);
  int seen = 0;
  while (seen < 50) {
    BaseModelParams p = sample_base_params(1000, rng);
    if (p.f > 0.033) continue;
    ++seen;
    EXPECT_EQ(p.l, 2);
  }
}

TEST(SampleRfComposite, SingleDimensionRange) {
  Rng rng(20);
  FeatureStats s = stats_from_rows({{0.0}, {10.0}});
  CompositeHash g = sample_rf_composite(s, 1, rng);
  ASSERT_EQ(g.l(), 1u);
  EXPECT_EQ(g.dims[0], 0);
  EXPECT_GE(g.cuts[0], 0.0);
  EXPECT_LE(g.cuts[0], 10.0);
}

TEST(SampleRfComposite, DimensionFrequencyUniform) {
  Rng rng(21);
  std::vector<std::vector<double>> rows = {{0, 0, 0, 0}, {1, 1, 1, 1}};
  FeatureStats s = stats_from_rows(rows);
  std::vector<int> counts(4, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    CompositeHash g = sample_rf_composite(s, 1, rng);
    counts[g.dims[0]]++;
  }
  for (int c : counts) {
    EXPECT_NEAR(c / static_cast<double>(draws), 0.25, 0.02);
  }
}

TEST(SampleRfComposite, DegenerateDimensionNeverSelected) {
  Rng rng(22);
  FeatureStats s = stats_from_rows({{0, 5}, {1, 5}});
  for (int i = 0; i < 500; ++i) {
    CompositeHash g = sample_rf_composite(s, 3, rng);
    for (int32_t dim : g.dims) EXPECT_EQ(dim, 0);
  }
}

TEST(SampleRfComposite, AllDegenerateThrows) {
  Rng rng(23);
  FeatureStats s = stats_from_rows({{2, 2}});
  EXPECT_THROW(sample_rf_composite(s, 1, rng), std::invalid_argument);
}

TEST(WeightedL1, Examples) {
  FeatureStats s1 = stats_from_rows({{0.0}, {10.0}});
  double x = 0.0, q = 5.0;
  EXPECT_DOUBLE_EQ(weighted_l1(&x, &q, s1), 0.5);
  EXPECT_DOUBLE_EQ(weighted_l1(&x, &x, s1), 0.0);
}

TEST(WeightedL1, TriangleInequality) {
  Rng rng(24);
  const size_t d = 6;
  std::vector<double> pts(30 * d);
  for (double& v : pts) v = rng.uniform(-2.0, 2.0);
  FeatureStats s = compute_feature_stats(pts.data(), 30, d);
  for (int rep = 0; rep < 200; ++rep) {
    const double* a = pts.data() + rng.uniform_int(30) * d;
    const double* b = pts.data() + rng.uniform_int(30) * d;
    const double* c = pts.data() + rng.uniform_int(30) * d;
    double ab = weighted_l1(a, b, s);
    double bc = weighted_l1(b, c, s);
    double ac = weighted_l1(a, c, s);
    EXPECT_LE(ac, ab + bc + 1e-12);
  }
}

TEST(RfCollisionProb, Examples) {
  FeatureStats s1 = stats_from_rows({{0.0}, {1.0}});
  double x0 = 0.0, q1 = 1.0;
  EXPECT_DOUBLE_EQ(rf_collision_prob(&x0, &x0, s1), 1.0);
  EXPECT_DOUBLE_EQ(rf_collision_prob(&x0, &q1, s1), 0.0);

  // two unit ranges, offsets 0.5 each: 1 - (0.5 + 0.5)/2 = 0.5
  FeatureStats s2 = stats_from_rows({{0, 0}, {1, 1}});
  std::vector<double> x{0.0, 0.0}, q{0.5, 0.5};
  EXPECT_DOUBLE_EQ(rf_collision_prob(x.data(), q.data(), s2), 0.5);
}

TEST(RfCollisionProb, MatchesEmpiricalFrequency) {
  // single-function collision frequency over 1e5 draws within 3 standard
  // errors of the predicted probability
  Rng rng(25);
  FeatureStats s = stats_from_rows({{0, 0}, {1, 1}});
  std::vector<double> x{0.0, 0.0}, q{0.5, 0.5};
  const int draws = 100000;
  int collisions = 0;
  for (int i = 0; i < draws; ++i) {
    CompositeHash g = sample_rf_composite(s, 1, rng);
    RfHashFunction h{g.dims[0], g.cuts[0]};
    collisions += rf_hash(h, x.data()) == rf_hash(h, q.data());
  }
  double p = rf_collision_prob(x.data(), q.data(), s);
  double se = std::sqrt(p * (1.0 - p) / draws);
  EXPECT_NEAR(collisions / static_cast<double>(draws), p, 3.0 * se);
}

TEST(RfCollisionProb, SymmetricAndOneIffZeroDistance) {
  Rng rng(26);
  const size_t d = 5;
  std::vector<double> pts(40 * d);
  for (double& v : pts) v = rng.uniform(0.0, 4.0);
  FeatureStats s = compute_feature_stats(pts.data(), 40, d);
  for (int rep = 0; rep < 100; ++rep) {
    const double* x = pts.data() + rng.uniform_int(40) * d;
    const double* q = pts.data() + rng.uniform_int(40) * d;
    EXPECT_DOUBLE_EQ(rf_collision_prob(x, q, s), rf_collision_prob(q, x, s));
    if (weighted_l1(x, q, s) == 0.0) {
      EXPECT_DOUBLE_EQ(rf_collision_prob(x, q, s), 1.0);
    } else {
      EXPECT_LT(rf_collision_prob(x, q, s), 1.0);
    }
  }
}

TEST(RpHash, ZeroPointExamples) {
  Rng rng(27);
  RpHashFunction h = sample_rp_hash(3, 4.0, rng);
  std::vector<double> zero{0.0, 0.0, 0.0};
  h.b = 0.0;
  EXPECT_EQ(rp_hash(h, zero.data(), 3), 0);
  h.b = 2.0;  // w/2
  EXPECT_EQ(rp_hash(h, zero.data(), 3), 0);
}

TEST(RpHash, OffsetWithinInterval) {
  Rng rng(28);
  for (int i = 0; i < 100; ++i) {
    RpHashFunction h = sample_rp_hash(4, 2.5, rng);
    EXPECT_GE(h.b, 0.0);
    EXPECT_LE(h.b, 2.5);
  }
}

TEST(RpHash, ScalingInvariance) {
  Rng rng(29);
  for (int rep = 0; rep < 100; ++rep) {
    size_t d = 1 + rng.uniform_int(8);
    RpHashFunction h = sample_rp_hash(d, rng.uniform(0.5, 4.0), rng);
    std::vector<double> x(d), x2(d);
    for (size_t i = 0; i < d; ++i) {
      x[i] = rng.uniform(-3.0, 3.0);
      x2[i] = 2.0 * x[i];
    }
    RpHashFunction scaled{h.a, 2.0 * h.b, 2.0 * h.w};
    EXPECT_EQ(rp_hash(h, x.data(), d), rp_hash(scaled, x2.data(), d));
  }
}

TEST(RshQuantize, Examples) {
  EXPECT_EQ(rsh_quantize(0.0, 0.0, 2.0, 0.0, 0.5), 0);   // x at min
  EXPECT_EQ(rsh_quantize(2.0, 0.0, 2.0, 0.0, 0.5), 2);   // x at max, f = 0.5
  EXPECT_THROW(rsh_quantize(1.0, 3.0, 3.0, 0.0, 0.5), std::invalid_argument);
}

// The quantizer applied to projected data equals the floor-form projection
// hash with w_i = f*(max'-min') and b_i = alpha*(max'-min'). Exact up to
// floating-point effects on inputs that land within an ulp of an integer
// boundary, which the check detects and sets aside.
TEST(RshQuantize, RotatedDataMatchesProjectionHash) {
  Rng rng(30);
  int checked = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const size_t n = 25, d = 4;
    std::vector<double> pts(n * d);
    for (double& v : pts) v = rng.uniform(-5.0, 5.0);
    double f = rng.uniform(0.05, 0.9);
    for (size_t dim = 0; dim < d; ++dim) {
      std::vector<double> a(d);
      for (double& v : a) v = rng.normal();
      std::vector<double> projected(n);
      for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < d; ++j) acc += pts[i * d + j] * a[j];
        projected[i] = acc;
      }
      double lo = *std::min_element(projected.begin(), projected.end());
      double hi = *std::max_element(projected.begin(), projected.end());
      if (lo == hi) continue;
      double alpha = rng.uniform(0.0, f);
      double w = f * (hi - lo);
      double b = alpha * (hi - lo);
      for (size_t i = 0; i < n; ++i) {
        int64_t lhs = rsh_quantize(projected[i], lo, hi, alpha, f);
        int64_t rhs = static_cast<int64_t>(std::floor((projected[i] + b - lo) / w));
        if (lhs != rhs) {
          // tolerate only genuine boundary cases
          double arg = ((projected[i] - lo) / (hi - lo) + alpha) / f;
          ASSERT_NEAR(arg, std::round(arg), 1e-9) << "non-boundary mismatch";
        } else {
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 9000);
}

}  // namespace
}  // namespace itables
