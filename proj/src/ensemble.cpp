#include "itables/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace itables {

std::string detector_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kLshItables: return "lsh-itables";
    case DetectorKind::kRsH: return "rs-h";
    case DetectorKind::kIforest: return "iforest";
  }
  return "unknown";
}

DetectorKind detector_from_name(const std::string& name) {
  if (name == "lsh-itables") return DetectorKind::kLshItables;
  if (name == "rs-h") return DetectorKind::kRsH;
  if (name == "iforest") return DetectorKind::kIforest;
  throw std::invalid_argument("unknown detector: " + name);
}

Orientation detector_orientation(DetectorKind kind) {
  return kind == DetectorKind::kIforest ? Orientation::kHigherIsOutlier
                                        : Orientation::kLowerIsOutlier;
}

namespace {

// First `s` entries of a seeded permutation of [0, n); partial Fisher-Yates.
std::vector<size_t> sample_without_replacement(size_t n, size_t s, Rng& rng) {
  std::vector<size_t> indices(n);
  std::iota(indices.begin(), indices.end(), size_t{0});
  for (size_t i = 0; i < s; ++i) {
    size_t j = i + rng.uniform_int(n - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(s);
  return indices;
}

std::vector<double> gather_rows(const Dataset& data, const std::vector<size_t>& rows) {
  std::vector<double> out;
  out.reserve(rows.size() * data.d);
  for (size_t r : rows) {
    const double* row = data.row(r);
    out.insert(out.end(), row, row + data.d);
  }
  return out;
}

}  // namespace

LshSharedSpec lsh_shared_spec(const Dataset& data, int m, uint64_t master_seed) {
  if (data.n == 0) throw std::invalid_argument("empty dataset");
  if (m < 1) throw std::invalid_argument("need at least one base model");
  LshSharedSpec spec;
  spec.stats = compute_feature_stats(data);
  int s = static_cast<int>(std::min<size_t>(kMaxSubsample, data.n));
  spec.params.reserve(m);
  spec.hashes.reserve(m);
  for (int j = 0; j < m; ++j) {
    uint64_t seed = derive_seed(master_seed, streams::kModelSetup, j);
    Rng rng(seed);
    BaseModelParams params = sample_base_params(s, rng);
    params.seed = seed;
    spec.params.push_back(params);
    spec.hashes.push_back(sample_rf_composite(spec.stats, params.l, rng));
  }
  return spec;
}

Histogram train_base(const Dataset& local, const CompositeHash& g, int s,
                     double epsilon, Rng& rng) {
  if (local.n == 0) throw std::invalid_argument("empty dataset");
  size_t s_eff = std::min<size_t>(static_cast<size_t>(s), local.n);
  std::vector<size_t> rows = sample_without_replacement(local.n, s_eff, rng);
  std::vector<double> sample = gather_rows(local, rows);
  std::vector<uint32_t> codes(s_eff);
  composite_codes(g, sample.data(), s_eff, local.d, codes.data());
  Histogram hist(static_cast<int>(g.l()));
  hist.increment_codes(codes.data(), codes.size());
  if (std::isfinite(epsilon)) hist.add_laplace_noise(epsilon, rng);
  return hist;
}

LshEnsembleModel lsh_itables_train(const Dataset& data, int m, double epsilon,
                                   uint64_t master_seed) {
  LshSharedSpec spec = lsh_shared_spec(data, m, master_seed);
  LshEnsembleModel model;
  model.stats = std::move(spec.stats);
  model.master_seed = master_seed;
  model.models.reserve(m);
  int s = static_cast<int>(std::min<size_t>(kMaxSubsample, data.n));
  for (int j = 0; j < m; ++j) {
    Rng rng(derive_seed(master_seed, streams::kTrain, 0, j));
    Histogram hist = train_base(data, spec.hashes[j], s, epsilon, rng);
    model.models.push_back(
        LshBaseModel{spec.params[j], std::move(spec.hashes[j]), std::move(hist)});
  }
  return model;
}

double score_base(const Histogram& hist, const CompositeHash& g, const double* q) {
  double count = hist.bucket(composite_code(g, q));
  return std::log2(std::max(count, 1.0));
}

double ensemble_score(const LshEnsembleModel& model, const double* q) {
  double total = 0.0;
  for (const LshBaseModel& base : model.models) {
    total += score_base(base.hist, base.g, q);
  }
  return total / static_cast<double>(model.models.size());
}

std::vector<double> lsh_score_all(const std::vector<const CompositeHash*>& hashes,
                                  const std::vector<const Histogram*>& hists,
                                  const Dataset& points) {
  if (hashes.size() != hists.size() || hashes.empty()) {
    throw std::invalid_argument("model is empty or inconsistent");
  }
  std::vector<double> scores(points.n, 0.0);
  std::vector<uint32_t> codes(points.n);
  std::vector<double> bucket_score;
  for (size_t j = 0; j < hashes.size(); ++j) {
    composite_codes(*hashes[j], points.values.data(), points.n, points.d,
                    codes.data());
    // per-bucket scores once per model; the histogram is tiny next to n
    const std::vector<double>& counts = hists[j]->counts();
    bucket_score.resize(counts.size());
    for (size_t c = 0; c < counts.size(); ++c) {
      bucket_score[c] = std::log2(std::max(counts[c], 1.0));
    }
    for (size_t i = 0; i < points.n; ++i) {
      scores[i] += bucket_score[codes[i]];
    }
  }
  double inv_m = 1.0 / static_cast<double>(hashes.size());
  for (double& s : scores) s *= inv_m;
  return scores;
}

std::vector<double> lsh_score_all(const LshEnsembleModel& model,
                                  const Dataset& points) {
  std::vector<const CompositeHash*> hashes;
  std::vector<const Histogram*> hists;
  for (const LshBaseModel& base : model.models) {
    hashes.push_back(&base.g);
    hists.push_back(&base.hist);
  }
  return lsh_score_all(hashes, hists, points);
}

// ---------------------------------------------------------------------------

RshSharedSpec rsh_shared_spec(const Dataset& data, int m, uint64_t master_seed) {
  if (data.n == 0) throw std::invalid_argument("empty dataset");
  if (m < 1) throw std::invalid_argument("need at least one base model");
  RshSharedSpec spec;
  spec.stats = compute_feature_stats(data);
  if (spec.stats.active_count() == 0) throw std::invalid_argument("constant dataset");
  int s = static_cast<int>(std::min<size_t>(kMaxSubsample, data.n));
  spec.models.reserve(m);
  for (int j = 0; j < m; ++j) {
    uint64_t seed = derive_seed(master_seed, streams::kModelSetup, j);
    Rng rng(seed);
    RshModelSpec ms;
    ms.params = sample_base_params(s, rng);
    ms.params.seed = seed;
    // the subspace has distinct dimensions, so l cannot exceed the number of
    // usable dimensions
    size_t l = std::min<size_t>(ms.params.l, spec.stats.active_count());
    std::vector<int32_t> pool = spec.stats.active_dims;
    for (size_t i = 0; i < l; ++i) {
      size_t pick = i + rng.uniform_int(pool.size() - i);
      std::swap(pool[i], pool[pick]);
    }
    ms.dims.assign(pool.begin(), pool.begin() + l);
    ms.alphas.reserve(l);
    for (size_t i = 0; i < l; ++i) ms.alphas.push_back(rng.uniform(0.0, ms.params.f));
    ms.sketch_seed = rng.next_u64();
    spec.models.push_back(std::move(ms));
  }
  return spec;
}

uint64_t rsh_key(const FeatureStats& stats, const RshModelSpec& spec,
                 const double* q) {
  int64_t quantized[kMaxHashCount];
  for (size_t i = 0; i < spec.dims.size(); ++i) {
    int32_t dim = spec.dims[i];
    quantized[i] = rsh_quantize(q[dim], stats.min[dim], stats.max[dim],
                                spec.alphas[i], spec.params.f);
  }
  return tuple_key(quantized, spec.dims.size());
}

CountMinSketch rsh_train_base(const Dataset& local, const FeatureStats& stats,
                              const RshModelSpec& spec, int s, double epsilon,
                              Rng& rng) {
  if (local.n == 0) throw std::invalid_argument("empty dataset");
  size_t s_eff = std::min<size_t>(static_cast<size_t>(s), local.n);
  std::vector<size_t> rows = sample_without_replacement(local.n, s_eff, rng);
  CountMinSketch sketch(CountMinSketch::kDefaultDepth, CountMinSketch::kDefaultWidth,
                        spec.sketch_seed);
  for (size_t r : rows) sketch.insert(rsh_key(stats, spec, local.row(r)));
  if (std::isfinite(epsilon)) sketch.add_laplace_noise(epsilon, rng);
  return sketch;
}

RshEnsembleModel rsh_train(const Dataset& data, int m, double epsilon,
                           uint64_t master_seed) {
  RshSharedSpec spec = rsh_shared_spec(data, m, master_seed);
  RshEnsembleModel model;
  model.stats = std::move(spec.stats);
  model.master_seed = master_seed;
  model.models.reserve(m);
  int s = static_cast<int>(std::min<size_t>(kMaxSubsample, data.n));
  for (int j = 0; j < m; ++j) {
    Rng rng(derive_seed(master_seed, streams::kTrain, 0, j));
    CountMinSketch sketch =
        rsh_train_base(data, model.stats, spec.models[j], s, epsilon, rng);
    model.models.push_back(RshBaseModel{std::move(spec.models[j]), std::move(sketch)});
  }
  return model;
}

double rsh_score(const RshEnsembleModel& model, const double* q) {
  double total = 0.0;
  for (const RshBaseModel& base : model.models) {
    double count = base.sketch.query(rsh_key(model.stats, base.spec, q));
    total += std::log2(std::max(count, 1.0));
  }
  return total / static_cast<double>(model.models.size());
}

std::vector<double> rsh_score_all(const FeatureStats& stats,
                                  const std::vector<const RshModelSpec*>& specs,
                                  const std::vector<const CountMinSketch*>& sketches,
                                  const Dataset& points) {
  if (specs.size() != sketches.size() || specs.empty()) {
    throw std::invalid_argument("model is empty or inconsistent");
  }
  std::vector<double> scores(points.n, 0.0);
  for (size_t j = 0; j < specs.size(); ++j) {
    for (size_t i = 0; i < points.n; ++i) {
      double count = sketches[j]->query(rsh_key(stats, *specs[j], points.row(i)));
      scores[i] += std::log2(std::max(count, 1.0));
    }
  }
  double inv_m = 1.0 / static_cast<double>(specs.size());
  for (double& s : scores) s *= inv_m;
  return scores;
}

std::vector<double> rsh_score_all(const RshEnsembleModel& model,
                                  const Dataset& points) {
  std::vector<const RshModelSpec*> specs;
  std::vector<const CountMinSketch*> sketches;
  for (const RshBaseModel& base : model.models) {
    specs.push_back(&base.spec);
    sketches.push_back(&base.sketch);
  }
  return rsh_score_all(model.stats, specs, sketches, points);
}

// ---------------------------------------------------------------------------

std::vector<IsolationForestModel> iforest_local_only_train(
    const std::vector<Dataset>& shards, int m, int subsample, int height_limit,
    uint64_t master_seed) {
  std::vector<IsolationForestModel> models;
  models.reserve(shards.size());
  for (size_t p = 0; p < shards.size(); ++p) {
    if (shards[p].n == 0) {
      models.push_back(IsolationForestModel{});  // empty model; scoring throws
      continue;
    }
    models.push_back(iforest_train(shards[p], m, subsample, height_limit,
                                   derive_seed(master_seed, p)));
  }
  return models;
}

std::vector<double> train_and_score(const DetectorConfig& config,
                                    const Dataset& data, uint64_t seed) {
  switch (config.kind) {
    case DetectorKind::kLshItables: {
      LshEnsembleModel model = lsh_itables_train(data, config.m, config.epsilon, seed);
      return lsh_score_all(model, data);
    }
    case DetectorKind::kRsH: {
      RshEnsembleModel model = rsh_train(data, config.m, config.epsilon, seed);
      return rsh_score_all(model, data);
    }
    case DetectorKind::kIforest: {
      IsolationForestModel model =
          iforest_train(data, config.m, config.iforest_subsample,
                        config.iforest_height_limit, seed);
      return iforest_score_all(model, data);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace itables
