#include "itables/evaluation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "gtest/gtest.h"
#include "itables/rng.hpp"

namespace itables {
namespace {

// Exhaustive pair-count AUC: P(outlier score > inlier score) + 0.5 P(tie),
// after orienting so higher = more outlying.
double auc_pair_oracle(const std::vector<double>& scores,
                       const std::vector<uint8_t>& labels,
                       Orientation orientation) {
  double flip = orientation == Orientation::kLowerIsOutlier ? -1.0 : 1.0;
  double wins = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      double si = flip * scores[i], sj = flip * scores[j];
      if (si > sj) wins += 1.0;
      else if (si == sj) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

TEST(Auc, PerfectSeparation) {
  std::vector<double> scores{2, 3, 0, 1};
  std::vector<uint8_t> labels{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(auc(scores, labels, Orientation::kHigherIsOutlier), 1.0);
}

TEST(Auc, AllTiesIsHalf) {
  std::vector<double> scores{5, 5, 5, 5};
  std::vector<uint8_t> labels{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(auc(scores, labels, Orientation::kHigherIsOutlier), 0.5);
}

TEST(Auc, SpecExampleAgainstOracle) {
  std::vector<double> scores{3, 1, 2, 0};
  std::vector<uint8_t> labels{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(auc(scores, labels, Orientation::kHigherIsOutlier), 1.0);
  EXPECT_DOUBLE_EQ(auc_pair_oracle(scores, labels, Orientation::kHigherIsOutlier), 1.0);
}

TEST(Auc, MatchesPairOracleOnRandomVectors) {
  Rng rng(60);
  for (int rep = 0; rep < 200; ++rep) {
    size_t n = 5 + rng.uniform_int(30);
    std::vector<double> scores(n);
    std::vector<uint8_t> labels(n);
    size_t pos = 0;
    for (size_t i = 0; i < n; ++i) {
      // coarse grid forces plenty of ties
      scores[i] = static_cast<double>(rng.uniform_int(6));
      labels[i] = rng.uniform01() < 0.4 ? 1 : 0;
      pos += labels[i];
    }
    if (pos == 0 || pos == n) continue;
    for (Orientation o :
         {Orientation::kHigherIsOutlier, Orientation::kLowerIsOutlier}) {
      ASSERT_NEAR(auc(scores, labels, o), auc_pair_oracle(scores, labels, o), 1e-12);
    }
  }
}

TEST(Auc, OrientationFlipMirrorsResult) {
  Rng rng(61);
  std::vector<double> scores(40);
  std::vector<uint8_t> labels(40);
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform(-1.0, 1.0);
    labels[i] = i % 3 == 0;
  }
  double hi = auc(scores, labels, Orientation::kHigherIsOutlier);
  double lo = auc(scores, labels, Orientation::kLowerIsOutlier);
  EXPECT_NEAR(hi + lo, 1.0, 1e-12);
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  Rng rng(62);
  std::vector<double> scores(30);
  std::vector<uint8_t> labels(30);
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform(0.0, 4.0);
    labels[i] = i % 4 == 0;
  }
  std::vector<double> mapped(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) mapped[i] = std::exp(scores[i]);
  EXPECT_DOUBLE_EQ(auc(scores, labels, Orientation::kHigherIsOutlier),
                   auc(mapped, labels, Orientation::kHigherIsOutlier));
}

TEST(Auc, DegenerateLabelsThrow) {
  std::vector<double> scores{1, 2};
  std::vector<uint8_t> ones{1, 1}, zeros{0, 0};
  EXPECT_THROW(auc(scores, ones, Orientation::kHigherIsOutlier), std::invalid_argument);
  EXPECT_THROW(auc(scores, zeros, Orientation::kHigherIsOutlier), std::invalid_argument);
}

Dataset one_dim(std::vector<double> values) {
  Dataset data;
  data.name = "inline";
  data.d = 1;
  data.n = values.size();
  data.values = std::move(values);
  data.labels.assign(data.n, 0);
  return data;
}

TEST(BallCount, HandCheckedLinearScan) {
  Dataset data = one_dim({0.0, 0.1, 0.2, 5.0});
  FeatureStats stats = compute_feature_stats(data);
  double q = 0.0;
  // weighted distance |x|/5 <= 0.04 <=> |x| <= 0.2
  EXPECT_EQ(ball_count(data, &q, 0.04, stats), 3);
}

TEST(BallCount, RadiusZeroCountsExactMatches) {
  Dataset data = one_dim({0.0, 0.5, 1.0});
  FeatureStats stats = compute_feature_stats(data);
  double q = 0.5;
  EXPECT_EQ(ball_count(data, &q, 0.0, stats), 1);
  double absent = 0.25;
  EXPECT_EQ(ball_count(data, &absent, 0.0, stats), 0);
}

TEST(BallCount, InfiniteRadiusCountsAll) {
  Dataset data = one_dim({0.0, 1.0, 2.0, 3.0});
  FeatureStats stats = compute_feature_stats(data);
  double q = 1.5;
  EXPECT_EQ(ball_count(data, &q, std::numeric_limits<double>::max(), stats), 4);
}

TEST(ExactBucketOracle, SumsToNAndMatchesHistogramPath) {
  Rng rng(63);
  for (int rep = 0; rep < 1000; ++rep) {
    size_t n = 1 + rng.uniform_int(20);
    size_t d = 1 + rng.uniform_int(3);
    Dataset data;
    data.d = d;
    data.n = n;
    data.values.resize(n * d);
    for (double& v : data.values) v = rng.uniform(-1.0, 1.0);
    data.labels.assign(n, 0);
    FeatureStats stats = compute_feature_stats(data);
    if (stats.active_count() == 0) continue;
    int l = 1 + static_cast<int>(rng.uniform_int(6));
    CompositeHash g = sample_rf_composite(stats, l, rng);

    auto oracle = exact_bucket_oracle(data, g);
    int64_t total = 0;
    for (auto& [code, count] : oracle) total += count;
    ASSERT_EQ(total, static_cast<int64_t>(n));

    std::vector<uint32_t> codes(n);
    composite_codes(g, data.values.data(), n, d, codes.data());
    Histogram hist(l);
    hist.increment_codes(codes.data(), n);
    for (uint32_t code = 0; code < hist.size(); ++code) {
      auto it = oracle.find(code);
      double expected = it == oracle.end() ? 0.0 : static_cast<double>(it->second);
      ASSERT_DOUBLE_EQ(hist.bucket(code), expected);
    }
  }
}

TEST(ExactBucketOracle, EmptyInput) {
  Dataset data;
  data.d = 2;
  CompositeHash g;
  g.dims = {0};
  g.cuts = {0.5};
  EXPECT_TRUE(exact_bucket_oracle(data, g).empty());
}

TEST(RepeatedEval, SingleRunHasZeroStd) {
  Dataset data = synth_planted(60, 6, 2, 8.0, 70);
  DetectorConfig config;
  config.m = 10;
  EvalResult result = repeated_eval(config, data, 1, 5);
  EXPECT_EQ(result.runs, 1);
  EXPECT_DOUBLE_EQ(result.auc_std, 0.0);
  EXPECT_GE(result.auc_mean, 0.0);
  EXPECT_LE(result.auc_mean, 1.0);
}

TEST(RepeatedEval, FixedSeedReproducible) {
  Dataset data = synth_planted(50, 5, 3, 8.0, 71);
  DetectorConfig config;
  config.m = 8;
  EvalResult a = repeated_eval(config, data, 3, 99);
  EvalResult b = repeated_eval(config, data, 3, 99);
  EXPECT_DOUBLE_EQ(a.auc_mean, b.auc_mean);
  EXPECT_DOUBLE_EQ(a.auc_std, b.auc_std);
}

TEST(RepeatedEval, DegenerateScoresGiveZeroStdAcrossRuns) {
  // extreme separation: every run ranks the planted outliers perfectly, so
  // the run-to-run std collapses to zero
  Dataset data = synth_planted(80, 8, 2, 100.0, 72);
  DetectorConfig config;
  config.kind = DetectorKind::kIforest;
  config.m = 25;
  EvalResult result = repeated_eval(config, data, 4, 11);
  EXPECT_DOUBLE_EQ(result.auc_mean, 1.0);
  EXPECT_DOUBLE_EQ(result.auc_std, 0.0);
}

TEST(ResultsCsv, AppendsHeaderOnceAndInfEpsilon) {
  std::string path = ::testing::TempDir() + "ledger.csv";
  std::filesystem::remove(path);
  EvalResult r;
  r.detector = "lsh-itables";
  r.dataset = "toy";
  r.runs = 2;
  r.auc_mean = 0.9;
  r.auc_std = 0.01;
  r.seconds = 0.5;
  r.epsilon = kNonPrivate;
  r.participants = 1;
  append_results_csv(path, r);
  r.epsilon = 0.01;
  append_results_csv(path, r);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "detector,dataset,runs,auc_mean,auc_std,seconds,epsilon,participants");
  std::getline(in, line);
  EXPECT_NE(line.find("inf"), std::string::npos);
  std::getline(in, line);
  EXPECT_NE(line.find("0.01"), std::string::npos);
  EXPECT_FALSE(std::getline(in, line));
}

}  // namespace
}  // namespace itables
