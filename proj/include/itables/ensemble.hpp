#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "itables/countmin.hpp"
#include "itables/dataset.hpp"
#include "itables/hashing.hpp"
#include "itables/histogram.hpp"
#include "itables/iforest.hpp"

namespace itables {

// The hashing detectors score inlierness (big bucket = inlier); the
// isolation forest scores outlierness. Scores travel with their orientation
// so AUC never silently inverts.
enum class Orientation { kLowerIsOutlier, kHigherIsOutlier };

enum class DetectorKind { kLshItables, kRsH, kIforest };

std::string detector_name(DetectorKind kind);
DetectorKind detector_from_name(const std::string& name);
Orientation detector_orientation(DetectorKind kind);

inline constexpr double kNonPrivate = std::numeric_limits<double>::infinity();
inline constexpr int kMaxSubsample = 1000;  // s = min(1000, n)

// ---------------------------------------------------------------------------
// LSH hash-table ensemble

struct LshBaseModel {
  BaseModelParams params;
  CompositeHash g;
  Histogram hist;
};

struct LshEnsembleModel {
  FeatureStats stats;
  std::vector<LshBaseModel> models;
  uint64_t master_seed = 0;
};

// The shared state a coordinator distributes: feature stats plus one
// composite hash per base model. Model j is sampled from the stream
// derive_seed(master, kModelSetup, j).
struct LshSharedSpec {
  FeatureStats stats;
  std::vector<BaseModelParams> params;
  std::vector<CompositeHash> hashes;
};

LshSharedSpec lsh_shared_spec(const Dataset& data, int m, uint64_t master_seed);

// Subsamples s points without replacement, inserts their codes, and adds
// Laplace noise iff epsilon is finite. s larger than the local size clamps.
Histogram train_base(const Dataset& local, const CompositeHash& g, int s,
                     double epsilon, Rng& rng);

LshEnsembleModel lsh_itables_train(const Dataset& data, int m, double epsilon,
                                   uint64_t master_seed);

// log2(max(bucket, 1)); the max guard absorbs noise-driven negatives.
double score_base(const Histogram& hist, const CompositeHash& g, const double* q);

double ensemble_score(const LshEnsembleModel& model, const double* q);

std::vector<double> lsh_score_all(const std::vector<const CompositeHash*>& hashes,
                                  const std::vector<const Histogram*>& hists,
                                  const Dataset& points);
std::vector<double> lsh_score_all(const LshEnsembleModel& model,
                                  const Dataset& points);

// ---------------------------------------------------------------------------
// Randomized-subspace baseline (CountMin-backed)

struct RshModelSpec {
  BaseModelParams params;      // f drives the quantizer step
  std::vector<int32_t> dims;   // distinct non-degenerate dimensions
  std::vector<double> alphas;  // per-dimension shift, alpha ~ U[0, f]
  uint64_t sketch_seed = 0;
};

struct RshSharedSpec {
  FeatureStats stats;
  std::vector<RshModelSpec> models;
};

RshSharedSpec rsh_shared_spec(const Dataset& data, int m, uint64_t master_seed);

struct RshBaseModel {
  RshModelSpec spec;
  CountMinSketch sketch;
};

struct RshEnsembleModel {
  FeatureStats stats;
  std::vector<RshBaseModel> models;
  uint64_t master_seed = 0;
};

uint64_t rsh_key(const FeatureStats& stats, const RshModelSpec& spec,
                 const double* q);

CountMinSketch rsh_train_base(const Dataset& local, const FeatureStats& stats,
                              const RshModelSpec& spec, int s, double epsilon,
                              Rng& rng);

RshEnsembleModel rsh_train(const Dataset& data, int m, double epsilon,
                           uint64_t master_seed);

double rsh_score(const RshEnsembleModel& model, const double* q);

std::vector<double> rsh_score_all(const FeatureStats& stats,
                                  const std::vector<const RshModelSpec*>& specs,
                                  const std::vector<const CountMinSketch*>& sketches,
                                  const Dataset& points);
std::vector<double> rsh_score_all(const RshEnsembleModel& model,
                                  const Dataset& points);

// ---------------------------------------------------------------------------
// Decentralized isolation forest (per-participant local models, no merging)

std::vector<IsolationForestModel> iforest_local_only_train(
    const std::vector<Dataset>& shards, int m,
    int subsample = kIforestSubsample, int height_limit = kIforestHeightLimit,
    uint64_t master_seed = 0);

// ---------------------------------------------------------------------------
// Uniform front end for the evaluation harness and the CLI

struct DetectorConfig {
  DetectorKind kind = DetectorKind::kLshItables;
  int m = 100;
  double epsilon = kNonPrivate;
  int iforest_subsample = kIforestSubsample;
  int iforest_height_limit = kIforestHeightLimit;
};

// Trains on `data` and scores every row of `data` (the detectors are
// unsupervised; labels are only consumed by the AUC step).
std::vector<double> train_and_score(const DetectorConfig& config,
                                    const Dataset& data, uint64_t seed);

}  // namespace itables
