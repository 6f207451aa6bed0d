#pragma once

#include <cstdint>
#include <vector>

#include "itables/dataset.hpp"
#include "itables/ensemble.hpp"
#include "itables/wire.hpp"

namespace itables {

enum class PartitionStrategy { kUniformRandom, kOutlierSkewed };

struct PartitionSpec {
  int k = 2;
  PartitionStrategy strategy = PartitionStrategy::kUniformRandom;
  double skew_fraction = 1.0;  // share of labeled outliers routed to participant 0
  uint64_t seed = 0;
};

// Disjoint cover of the dataset. Uniform-random shuffles and deals to
// near-equal sizes; outlier-skewed routes the given fraction of labeled
// outliers to participant 0 and deals the remaining points round-robin over
// all participants. k = 1 returns the dataset unchanged.
std::vector<Dataset> partition(const Dataset& data, const PartitionSpec& spec);

struct PrivacyAccount {
  std::vector<double> per_participant;
  double total = 0.0;  // sum of per-participant budgets; inf when any is non-private
};

struct CollabResult {
  std::vector<double> participant_auc;  // NaN for excluded participants
  std::vector<int> evaluated;           // participant ids that entered the mean
  double mean_auc = 0.0;
  PrivacyAccount account;
};

// One collaboration round: a coordinator with full-dataset visibility
// samples the shared feature stats and hash functions and broadcasts them;
// each participant trains per-model histograms on its own shard, noises
// them with its own budget, and releases; every participant then merges all
// k releases and scores its own shard locally. Every exchanged message goes
// through the JSON wire format (and into the transcript when given).
// Participants whose shard is empty or single-class are excluded from the
// AUC average with a warning.
CollabResult run_collaboration(const Dataset& data, const PartitionSpec& spec,
                               int m, const std::vector<double>& epsilons,
                               uint64_t master_seed,
                               wire::Transcript* transcript = nullptr);

// Same protocol with the randomized-subspace detector and CountMin sketches.
CollabResult run_collaboration_rsh(const Dataset& data, const PartitionSpec& spec,
                                   int m, const std::vector<double>& epsilons,
                                   uint64_t master_seed,
                                   wire::Transcript* transcript = nullptr);

}  // namespace itables
