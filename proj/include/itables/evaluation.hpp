#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "itables/dataset.hpp"
#include "itables/ensemble.hpp"
#include "itables/hashing.hpp"

namespace itables {

// Mann-Whitney AUC with midrank tie handling: the probability that a random
// outlier outranks a random inlier, ties counted half. The orientation flag
// says which direction of the raw score means "more outlying".
double auc(const std::vector<double>& scores, const std::vector<uint8_t>& labels,
           Orientation orientation);

struct EvalResult {
  std::string detector;
  std::string dataset;
  int runs = 0;
  double auc_mean = 0.0;
  double auc_std = 0.0;
  double seconds = 0.0;
  double epsilon = kNonPrivate;
  int participants = 1;
};

// Independent train+score cycles with seeds derived from the master seed.
// Timing covers training and scoring only.
EvalResult repeated_eval(const DetectorConfig& config, const Dataset& data,
                         int runs, uint64_t master_seed);

// Exact linear-scan count of points within weighted-l1 radius r of q. Test
// oracle: the distance is recomputed here, independent of the hashing
// module and the SIMD kernels.
int ball_count(const double* points, size_t n, size_t d, const double* q,
               double r, const FeatureStats& stats);
int ball_count(const Dataset& data, const double* q, double r,
               const FeatureStats& stats);

// Exact bucket counts by full scan with per-function comparisons, bypassing
// both the batch kernels and the histogram type.
std::map<uint32_t, int64_t> exact_bucket_oracle(const Dataset& data,
                                                const CompositeHash& g);

// Appends one row to the results ledger, writing the header first when the
// file does not exist yet. Columns:
// detector,dataset,runs,auc_mean,auc_std,seconds,epsilon,participants
void append_results_csv(const std::string& path, const EvalResult& result);

}  // namespace itables
