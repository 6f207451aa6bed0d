#include "itables/collaborative.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "itables/evaluation.hpp"

namespace itables {

namespace {

Dataset make_shard(const Dataset& data, const std::vector<size_t>& rows, int id) {
  Dataset shard;
  shard.name = data.name;
  shard.provenance = data.provenance + " shard " + std::to_string(id);
  shard.d = data.d;
  shard.n = rows.size();
  shard.values.reserve(rows.size() * data.d);
  shard.labels.reserve(rows.size());
  for (size_t r : rows) {
    const double* row = data.row(r);
    shard.values.insert(shard.values.end(), row, row + data.d);
    shard.labels.push_back(data.labels[r]);
  }
  return shard;
}

bool has_both_classes(const Dataset& shard) {
  bool pos = false, neg = false;
  for (uint8_t v : shard.labels) (v ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

std::vector<Dataset> partition(const Dataset& data, const PartitionSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("need at least one participant");
  if (static_cast<size_t>(spec.k) > data.n) {
    throw std::invalid_argument("more participants than points");
  }
  if (spec.k == 1) return {make_shard(data, [&] {
           std::vector<size_t> all(data.n);
           std::iota(all.begin(), all.end(), size_t{0});
           return all;
         }(), 0)};

  Rng rng(spec.seed);
  std::vector<std::vector<size_t>> assignment(spec.k);

  auto deal = [&](std::vector<size_t>& rows, size_t first_participant) {
    for (size_t i = 0; i < rows.size(); ++i) {
      assignment[(first_participant + i) % spec.k].push_back(rows[i]);
    }
  };

  if (spec.strategy == PartitionStrategy::kUniformRandom) {
    std::vector<size_t> all(data.n);
    std::iota(all.begin(), all.end(), size_t{0});
    for (size_t i = all.size(); i > 1; --i) {
      std::swap(all[i - 1], all[rng.uniform_int(i)]);
    }
    deal(all, 0);
  } else {
    if (spec.skew_fraction < 0.0 || spec.skew_fraction > 1.0) {
      throw std::invalid_argument("skew fraction must be in [0, 1]");
    }
    std::vector<size_t> outliers, rest;
    for (size_t i = 0; i < data.n; ++i) {
      (data.labels[i] ? outliers : rest).push_back(i);
    }
    for (size_t i = outliers.size(); i > 1; --i) {
      std::swap(outliers[i - 1], outliers[rng.uniform_int(i)]);
    }
    size_t routed = static_cast<size_t>(
        std::llround(spec.skew_fraction * static_cast<double>(outliers.size())));
    for (size_t i = 0; i < routed; ++i) assignment[0].push_back(outliers[i]);
    rest.insert(rest.end(), outliers.begin() + routed, outliers.end());
    for (size_t i = rest.size(); i > 1; --i) {
      std::swap(rest[i - 1], rest[rng.uniform_int(i)]);
    }
    deal(rest, 0);
  }

  std::vector<Dataset> shards;
  shards.reserve(spec.k);
  for (int p = 0; p < spec.k; ++p) {
    std::sort(assignment[p].begin(), assignment[p].end());
    shards.push_back(make_shard(data, assignment[p], p));
  }
  return shards;
}

namespace {

// Shared tail of both protocols: average the local AUCs of usable shards
// and total the privacy budgets.
CollabResult finalize(const std::vector<Dataset>& shards,
                      const std::vector<std::vector<double>>& shard_scores,
                      Orientation orientation,
                      const std::vector<double>& epsilons) {
  CollabResult result;
  result.participant_auc.assign(shards.size(),
                                std::numeric_limits<double>::quiet_NaN());
  double total_auc = 0.0;
  for (size_t p = 0; p < shards.size(); ++p) {
    if (shards[p].n == 0 || !has_both_classes(shards[p])) {
      std::fprintf(stderr,
                   "warning: participant %zu excluded from AUC average "
                   "(empty or single-class shard)\n",
                   p);
      continue;
    }
    double a = auc(shard_scores[p], shards[p].labels, orientation);
    result.participant_auc[p] = a;
    result.evaluated.push_back(static_cast<int>(p));
    total_auc += a;
  }
  if (result.evaluated.empty()) {
    throw std::runtime_error("no participant has a scoreable shard");
  }
  result.mean_auc = total_auc / static_cast<double>(result.evaluated.size());
  result.account.per_participant = epsilons;
  result.account.total = std::accumulate(epsilons.begin(), epsilons.end(), 0.0);
  return result;
}

}  // namespace

CollabResult run_collaboration(const Dataset& data, const PartitionSpec& spec,
                               int m, const std::vector<double>& epsilons,
                               uint64_t master_seed, wire::Transcript* transcript) {
  if (static_cast<int>(epsilons.size()) != spec.k) {
    throw std::invalid_argument("need one epsilon per participant");
  }
  std::vector<Dataset> shards = partition(data, spec);

  // coordinator: shared stats + hash functions, broadcast as one message
  LshSharedSpec coord = lsh_shared_spec(data, m, master_seed);
  wire::json spec_msg = wire::lsh_hash_spec(coord);
  if (transcript) transcript->log(spec_msg);

  // train-and-release phase; every participant works from the wire message
  std::vector<std::vector<wire::json>> releases(spec.k);
  for (int p = 0; p < spec.k; ++p) {
    LshSharedSpec local = wire::lsh_hash_spec_from_json(spec_msg);
    int s = static_cast<int>(std::min<size_t>(kMaxSubsample, shards[p].n));
    for (int j = 0; j < m; ++j) {
      Rng rng(derive_seed(master_seed, streams::kTrain, p, j));
      Histogram hist = [&] {
        if (shards[p].n == 0) {
          Histogram empty(static_cast<int>(local.hashes[j].l()));
          if (std::isfinite(epsilons[p])) empty.add_laplace_noise(epsilons[p], rng);
          return empty;
        }
        return train_base(shards[p], local.hashes[j], s, epsilons[p], rng);
      }();
      releases[p].push_back(wire::histogram_release(hist, p, j));
      if (transcript) transcript->log(releases[p].back());
    }
  }

  // merge barrier: each participant aggregates all k releases per model and
  // scores its own shard
  std::vector<std::vector<double>> shard_scores(spec.k);
  for (int p = 0; p < spec.k; ++p) {
    if (shards[p].n == 0) continue;
    LshSharedSpec local = wire::lsh_hash_spec_from_json(spec_msg);
    std::vector<Histogram> merged;
    merged.reserve(m);
    for (int j = 0; j < m; ++j) {
      std::vector<Histogram> parts;
      parts.reserve(spec.k);
      for (int src = 0; src < spec.k; ++src) {
        parts.push_back(wire::histogram_from_release(releases[src][j]));
      }
      std::vector<const Histogram*> part_ptrs;
      for (const Histogram& h : parts) part_ptrs.push_back(&h);
      merged.push_back(Histogram::merge(part_ptrs));
    }
    std::vector<const CompositeHash*> hashes;
    std::vector<const Histogram*> hists;
    for (int j = 0; j < m; ++j) {
      hashes.push_back(&local.hashes[j]);
      hists.push_back(&merged[j]);
    }
    shard_scores[p] = lsh_score_all(hashes, hists, shards[p]);
  }

  return finalize(shards, shard_scores, Orientation::kLowerIsOutlier, epsilons);
}

CollabResult run_collaboration_rsh(const Dataset& data, const PartitionSpec& spec,
                                   int m, const std::vector<double>& epsilons,
                                   uint64_t master_seed,
                                   wire::Transcript* transcript) {
  if (static_cast<int>(epsilons.size()) != spec.k) {
    throw std::invalid_argument("need one epsilon per participant");
  }
  std::vector<Dataset> shards = partition(data, spec);

  RshSharedSpec coord = rsh_shared_spec(data, m, master_seed);
  wire::json spec_msg = wire::rsh_hash_spec(coord);
  if (transcript) transcript->log(spec_msg);

  std::vector<std::vector<wire::json>> releases(spec.k);
  for (int p = 0; p < spec.k; ++p) {
    RshSharedSpec local = wire::rsh_hash_spec_from_json(spec_msg);
    int s = static_cast<int>(std::min<size_t>(kMaxSubsample, shards[p].n));
    for (int j = 0; j < m; ++j) {
      Rng rng(derive_seed(master_seed, streams::kTrain, p, j));
      CountMinSketch sketch = [&] {
        if (shards[p].n == 0) {
          CountMinSketch empty(CountMinSketch::kDefaultDepth,
                               CountMinSketch::kDefaultWidth,
                               local.models[j].sketch_seed);
          if (std::isfinite(epsilons[p])) empty.add_laplace_noise(epsilons[p], rng);
          return empty;
        }
        return rsh_train_base(shards[p], local.stats, local.models[j], s,
                              epsilons[p], rng);
      }();
      releases[p].push_back(wire::sketch_release(sketch, p, j));
      if (transcript) transcript->log(releases[p].back());
    }
  }

  std::vector<std::vector<double>> shard_scores(spec.k);
  for (int p = 0; p < spec.k; ++p) {
    if (shards[p].n == 0) continue;
    RshSharedSpec local = wire::rsh_hash_spec_from_json(spec_msg);
    std::vector<CountMinSketch> merged;
    merged.reserve(m);
    for (int j = 0; j < m; ++j) {
      std::vector<CountMinSketch> parts;
      parts.reserve(spec.k);
      for (int src = 0; src < spec.k; ++src) {
        parts.push_back(wire::sketch_from_release(releases[src][j]));
      }
      std::vector<const CountMinSketch*> part_ptrs;
      for (const CountMinSketch& s2 : parts) part_ptrs.push_back(&s2);
      merged.push_back(CountMinSketch::merge(part_ptrs));
    }
    std::vector<const RshModelSpec*> specs;
    std::vector<const CountMinSketch*> sketches;
    for (int j = 0; j < m; ++j) {
      specs.push_back(&local.models[j]);
      sketches.push_back(&merged[j]);
    }
    shard_scores[p] = rsh_score_all(local.stats, specs, sketches, shards[p]);
  }

  return finalize(shards, shard_scores, Orientation::kLowerIsOutlier, epsilons);
}

}  // namespace itables
