#include "itables/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "itables/rng.hpp"

namespace itables {

double iforest_c(size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  constexpr double kEulerGamma = 0.5772156649015329;
  double h = std::log(static_cast<double>(n - 1)) + kEulerGamma;
  return 2.0 * h - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

double IsolationTree::path_length(const double* q) const {
  const IsoNode* node = &nodes[0];
  double depth = 0.0;
  while (node->dim >= 0) {
    node = q[node->dim] < node->cut ? &nodes[node->left] : &nodes[node->right];
    depth += 1.0;
  }
  return depth + iforest_c(static_cast<size_t>(node->size));
}

namespace {

struct TreeBuilder {
  const Dataset& data;
  int height_limit;
  Rng& rng;
  std::vector<IsoNode>& nodes;

  // Grows the subtree over data rows indices[begin, end); returns node id.
  int32_t build(std::vector<size_t>& indices, size_t begin, size_t end, int depth) {
    int32_t id = static_cast<int32_t>(nodes.size());
    nodes.push_back(IsoNode{});
    nodes[id].size = static_cast<int32_t>(end - begin);
    if (end - begin <= 1 || depth >= height_limit) return id;

    // candidate dimensions: those not constant over this node
    size_t d = data.d;
    std::vector<int32_t> cand;
    std::vector<double> lo(d), hi(d);
    for (size_t j = 0; j < d; ++j) {
      lo[j] = hi[j] = data.row(indices[begin])[j];
    }
    for (size_t i = begin + 1; i < end; ++i) {
      const double* row = data.row(indices[i]);
      for (size_t j = 0; j < d; ++j) {
        lo[j] = std::min(lo[j], row[j]);
        hi[j] = std::max(hi[j], row[j]);
      }
    }
    for (size_t j = 0; j < d; ++j) {
      if (lo[j] < hi[j]) cand.push_back(static_cast<int32_t>(j));
    }
    if (cand.empty()) return id;  // constant node degenerates to a leaf

    int32_t dim = cand[rng.uniform_int(cand.size())];
    double cut = rng.uniform(lo[dim], hi[dim]);

    auto mid_it = std::partition(indices.begin() + begin, indices.begin() + end,
                                 [&](size_t row) { return data.row(row)[dim] < cut; });
    size_t mid = static_cast<size_t>(mid_it - indices.begin());
    if (mid == begin || mid == end) return id;  // cut failed to separate

    nodes[id].dim = dim;
    nodes[id].cut = cut;
    nodes[id].left = build(indices, begin, mid, depth + 1);
    nodes[id].right = build(indices, mid, end, depth + 1);
    return id;
  }
};

}  // namespace

IsolationForestModel iforest_train(const Dataset& data, int m, int subsample,
                                   int height_limit, uint64_t master_seed) {
  if (data.n == 0) throw std::invalid_argument("empty dataset");
  if (m < 1) throw std::invalid_argument("need at least one tree");
  IsolationForestModel model;
  model.d = data.d;
  model.subsample = static_cast<int>(std::min<size_t>(subsample, data.n));
  model.height_limit = height_limit;
  model.master_seed = master_seed;
  model.trees.resize(m);

  std::vector<size_t> all(data.n);
  std::iota(all.begin(), all.end(), size_t{0});

  for (int t = 0; t < m; ++t) {
    Rng rng(derive_seed(master_seed, streams::kTrain, static_cast<uint64_t>(t)));
    // partial Fisher-Yates: the first `subsample` entries become the sample
    std::vector<size_t> indices = all;
    size_t s = static_cast<size_t>(model.subsample);
    for (size_t i = 0; i < s; ++i) {
      size_t j = i + rng.uniform_int(data.n - i);
      std::swap(indices[i], indices[j]);
    }
    indices.resize(s);
    model.trees[t].nodes.reserve(2 * s);
    TreeBuilder builder{data, height_limit, rng, model.trees[t].nodes};
    builder.build(indices, 0, s, 0);
  }
  return model;
}

double iforest_mean_path(const IsolationForestModel& model, const double* q) {
  if (model.trees.empty()) throw std::logic_error("empty isolation forest model");
  double total = 0.0;
  for (const IsolationTree& tree : model.trees) total += tree.path_length(q);
  return total / static_cast<double>(model.trees.size());
}

double iforest_score(const IsolationForestModel& model, const double* q) {
  double denom = iforest_c(static_cast<size_t>(model.subsample));
  if (denom <= 0.0) return 1.0;  // single-point subsample isolates everything
  return std::exp2(-iforest_mean_path(model, q) / denom);
}

std::vector<double> iforest_score_all(const IsolationForestModel& model,
                                      const Dataset& data) {
  if (model.trees.empty()) throw std::logic_error("empty isolation forest model");
  std::vector<double> mean_paths(data.n, 0.0);
  for (const IsolationTree& tree : model.trees) {
    for (size_t i = 0; i < data.n; ++i) {
      mean_paths[i] += tree.path_length(data.row(i));
    }
  }
  double denom = iforest_c(static_cast<size_t>(model.subsample));
  std::vector<double> scores(data.n);
  for (size_t i = 0; i < data.n; ++i) {
    double mean = mean_paths[i] / static_cast<double>(model.trees.size());
    scores[i] = denom <= 0.0 ? 1.0 : std::exp2(-mean / denom);
  }
  return scores;
}

}  // namespace itables
