#pragma once

#include <cstdint>
#include <vector>

#include "itables/dataset.hpp"

namespace itables {

// Average unsuccessful-search path length of a binary search tree over n
// points; normalizes isolation path lengths.
double iforest_c(size_t n);

struct IsoNode {
  int32_t dim = -1;  // -1 marks a leaf
  double cut = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  int32_t size = 0;  // training points that reached this node
};

struct IsolationTree {
  std::vector<IsoNode> nodes;  // nodes[0] is the root

  double path_length(const double* q) const;
};

struct IsolationForestModel {
  std::vector<IsolationTree> trees;
  size_t d = 0;
  int subsample = 0;  // clamped to the training size
  int height_limit = 0;
  uint64_t master_seed = 0;
};

inline constexpr int kIforestSubsample = 256;
inline constexpr int kIforestHeightLimit = 8;

// m trees, each grown on a fresh subsample without replacement. Splits pick
// a uniform dimension among those non-constant at the node and a cut
// uniform in the node's [min, max]; leaves close at the height limit, a
// single point, or a constant node.
IsolationForestModel iforest_train(const Dataset& data, int m,
                                   int subsample = kIforestSubsample,
                                   int height_limit = kIforestHeightLimit,
                                   uint64_t master_seed = 0);

double iforest_mean_path(const IsolationForestModel& model, const double* q);

// 2^(-mean_path/c(subsample)); higher = more outlying.
double iforest_score(const IsolationForestModel& model, const double* q);

std::vector<double> iforest_score_all(const IsolationForestModel& model,
                                      const Dataset& data);

}  // namespace itables
