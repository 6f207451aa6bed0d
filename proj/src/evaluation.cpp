#include "itables/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace itables {

double auc(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
           Orientation orientation) {
  if (scores.size() != labels.size()) throw std::invalid_argument("length mismatch");
  size_t positives = 0;
  for (uint8_t v : labels) positives += v;
  size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw std::invalid_argument("degenerate labels");

  // orient so that higher oriented score = more outlying
  double flip = orientation == Orientation::kLowerIsOutlier ? -1.0 : 1.0;
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return flip * scores[a] < flip * scores[b];
  });

  // midranks: tied scores share the average of their rank positions
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() &&
           flip * scores[order[j + 1]] == flip * scores[order[i]]) {
      ++j;
    }
    double midrank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (size_t k = i; k <= j; ++k) {
      if (labels[order[k]]) rank_sum_pos += midrank;
    }
    i = j + 1;
  }

  double p = static_cast<double>(positives);
  double n = static_cast<double>(negatives);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

EvalResult repeated_eval(const DetectorConfig& config, const Dataset& data,
                         int runs, uint64_t master_seed) {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  EvalResult result;
  result.detector = detector_name(config.kind);
  result.dataset = data.name;
  result.runs = runs;
  result.epsilon = config.epsilon;
  result.participants = 1;

  Orientation orientation = detector_orientation(config.kind);
  std::vector<double> aucs;
  aucs.reserve(runs);
  auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < runs; ++r) {
    uint64_t seed = derive_seed(master_seed, streams::kRun, static_cast<uint64_t>(r));
    std::vector<double> scores = train_and_score(config, data, seed);
    aucs.push_back(auc(scores, data.labels, orientation));
  }
  auto stop = std::chrono::steady_clock::now();
  result.seconds = std::chrono::duration<double>(stop - start).count();

  double mean = std::accumulate(aucs.begin(), aucs.end(), 0.0) / runs;
  double var = 0.0;
  for (double a : aucs) var += (a - mean) * (a - mean);
  result.auc_mean = mean;
  result.auc_std = std::sqrt(var / runs);
  return result;
}

int ball_count(const double* points, size_t n, size_t d, const double* q,
               double r, const FeatureStats& stats) {
  if (r < 0.0) throw std::invalid_argument("radius must be non-negative");
  int count = 0;
  for (size_t i = 0; i < n; ++i) {
    const double* x = points + i * d;
    double dist = 0.0;
    for (size_t j = 0; j < d; ++j) {
      if (stats.degenerate[j]) continue;
      dist += std::fabs(x[j] - q[j]) / (stats.max[j] - stats.min[j]);
    }
    if (dist <= r) ++count;
  }
  return count;
}

int ball_count(const Dataset& data, const double* q, double r,
               const FeatureStats& stats) {
  return ball_count(data.values.data(), data.n, data.d, q, r, stats);
}

std::map<uint32_t, int64_t> exact_bucket_oracle(const Dataset& data,
                                                const CompositeHash& g) {
  std::map<uint32_t, int64_t> buckets;
  for (size_t i = 0; i < data.n; ++i) {
    const double* x = data.row(i);
    uint32_t code = 0;
    for (size_t j = 0; j < g.l(); ++j) {
      if (x[g.dims[j]] >= g.cuts[j]) code |= uint32_t{1} << j;
    }
    buckets[code] += 1;
  }
  return buckets;
}

void append_results_csv(const std::string& path, const EvalResult& result) {
  bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open results file " + path);
  if (fresh) {
    out << "detector,dataset,runs,auc_mean,auc_std,seconds,epsilon,participants\n";
  }
  out << result.detector << ',' << result.dataset << ',' << result.runs << ','
      << result.auc_mean << ',' << result.auc_std << ',' << result.seconds << ',';
  if (std::isfinite(result.epsilon)) {
    out << result.epsilon;
  } else {
    out << "inf";
  }
  out << ',' << result.participants << '\n';
}

}  // namespace itables
