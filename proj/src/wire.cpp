#include "itables/wire.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace itables::wire {

json epsilon_to_json(double epsilon) {
  if (std::isfinite(epsilon)) return epsilon;
  return "inf";
}

double epsilon_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kNonPrivate;
    throw std::invalid_argument("bad epsilon token");
  }
  return j.get<double>();
}

json stats_to_json(const FeatureStats& stats) {
  std::vector<int> mask(stats.degenerate.begin(), stats.degenerate.end());
  return json{{"d", stats.dim()},
              {"min", stats.min},
              {"max", stats.max},
              {"degenerate", mask}};
}

FeatureStats stats_from_json(const json& j) {
  FeatureStats stats;
  stats.min = j.at("min").get<std::vector<double>>();
  stats.max = j.at("max").get<std::vector<double>>();
  std::vector<int> mask = j.at("degenerate").get<std::vector<int>>();
  size_t d = j.at("d").get<size_t>();
  if (stats.min.size() != d || stats.max.size() != d || mask.size() != d) {
    throw std::invalid_argument("inconsistent stats record");
  }
  stats.degenerate.assign(mask.begin(), mask.end());
  stats.weight.resize(d);
  for (size_t i = 0; i < d; ++i) {
    stats.weight[i] = stats.degenerate[i] ? 0.0 : 1.0 / (stats.max[i] - stats.min[i]);
    if (!stats.degenerate[i]) stats.active_dims.push_back(static_cast<int32_t>(i));
  }
  return stats;
}

json composite_to_json(const CompositeHash& g) {
  json funcs = json::array();
  for (size_t j = 0; j < g.l(); ++j) {
    funcs.push_back(json::array({g.dims[j], g.cuts[j]}));
  }
  return json{{"l", g.l()}, {"funcs", funcs}};
}

CompositeHash composite_from_json(const json& j) {
  CompositeHash g;
  size_t l = j.at("l").get<size_t>();
  if (l < 1 || l > static_cast<size_t>(kMaxHashCount)) {
    throw std::invalid_argument("hash count out of range");
  }
  const json& funcs = j.at("funcs");
  if (funcs.size() != l) throw std::invalid_argument("inconsistent hash record");
  for (const json& f : funcs) {
    g.dims.push_back(f.at(0).get<int32_t>());
    g.cuts.push_back(f.at(1).get<double>());
  }
  return g;
}

json params_to_json(const BaseModelParams& p) {
  return json{{"f", p.f}, {"l", p.l}, {"s", p.s}, {"seed", p.seed}};
}

BaseModelParams params_from_json(const json& j) {
  return BaseModelParams{j.at("f").get<double>(), j.at("l").get<int>(),
                         j.at("s").get<int>(), j.at("seed").get<uint64_t>()};
}

json histogram_release(const Histogram& hist, int participant_id, int model_id) {
  const std::vector<double>& eps = hist.epsilons();
  return json{{"type", "histogram-release"},
              {"participant_id", participant_id},
              {"model_id", model_id},
              {"l", hist.l()},
              {"counts", hist.counts()},
              {"epsilon", eps.empty() ? epsilon_to_json(kNonPrivate)
                                      : epsilon_to_json(eps.front())}};
}

Histogram histogram_from_release(const json& j) {
  int l = j.at("l").get<int>();
  std::vector<double> counts = j.at("counts").get<std::vector<double>>();
  double eps = epsilon_from_json(j.at("epsilon"));
  std::vector<double> tags;
  bool noised = std::isfinite(eps);
  if (noised) tags.push_back(eps);
  return Histogram::from_parts(l, std::move(counts), std::move(tags), 1, noised);
}

json sketch_release(const CountMinSketch& sketch, int participant_id, int model_id) {
  const std::vector<double>& eps = sketch.epsilons();
  return json{{"type", "sketch-release"},
              {"participant_id", participant_id},
              {"model_id", model_id},
              {"depth", sketch.depth()},
              {"width", sketch.width()},
              {"row_seeds", sketch.row_seeds()},
              {"cells", sketch.cells()},
              {"epsilon", eps.empty() ? epsilon_to_json(kNonPrivate)
                                      : epsilon_to_json(eps.front())}};
}

CountMinSketch sketch_from_release(const json& j) {
  int depth = j.at("depth").get<int>();
  int width = j.at("width").get<int>();
  std::vector<uint64_t> row_seeds = j.at("row_seeds").get<std::vector<uint64_t>>();
  if (static_cast<int>(row_seeds.size()) != depth) {
    throw std::invalid_argument("inconsistent sketch record");
  }
  std::vector<double> cells = j.at("cells").get<std::vector<double>>();
  double eps = epsilon_from_json(j.at("epsilon"));
  std::vector<double> tags;
  bool noised = std::isfinite(eps);
  if (noised) tags.push_back(eps);
  return CountMinSketch::from_parts(width, std::move(row_seeds), std::move(cells),
                                    std::move(tags), noised);
}

json lsh_hash_spec(const LshSharedSpec& spec) {
  json hashes = json::array();
  for (const CompositeHash& g : spec.hashes) hashes.push_back(composite_to_json(g));
  json params = json::array();
  for (const BaseModelParams& p : spec.params) params.push_back(params_to_json(p));
  return json{{"type", "hash-spec"},
              {"detector", "lsh-itables"},
              {"stats", stats_to_json(spec.stats)},
              {"params", params},
              {"hashes", hashes}};
}

LshSharedSpec lsh_hash_spec_from_json(const json& j) {
  LshSharedSpec spec;
  spec.stats = stats_from_json(j.at("stats"));
  for (const json& p : j.at("params")) spec.params.push_back(params_from_json(p));
  for (const json& h : j.at("hashes")) spec.hashes.push_back(composite_from_json(h));
  if (spec.params.size() != spec.hashes.size()) {
    throw std::invalid_argument("inconsistent hash spec");
  }
  return spec;
}

json rsh_hash_spec(const RshSharedSpec& spec) {
  json models = json::array();
  for (const RshModelSpec& m : spec.models) {
    models.push_back(json{{"params", params_to_json(m.params)},
                          {"dims", m.dims},
                          {"alphas", m.alphas},
                          {"sketch_seed", m.sketch_seed}});
  }
  return json{{"type", "hash-spec"},
              {"detector", "rs-h"},
              {"stats", stats_to_json(spec.stats)},
              {"models", models}};
}

RshSharedSpec rsh_hash_spec_from_json(const json& j) {
  RshSharedSpec spec;
  spec.stats = stats_from_json(j.at("stats"));
  for (const json& m : j.at("models")) {
    RshModelSpec ms;
    ms.params = params_from_json(m.at("params"));
    ms.dims = m.at("dims").get<std::vector<int32_t>>();
    ms.alphas = m.at("alphas").get<std::vector<double>>();
    ms.sketch_seed = m.at("sketch_seed").get<uint64_t>();
    spec.models.push_back(std::move(ms));
  }
  return spec;
}

json lsh_model_to_json(const LshEnsembleModel& model) {
  json models = json::array();
  for (const LshBaseModel& base : model.models) {
    const std::vector<double>& eps = base.hist.epsilons();
    models.push_back(json{{"params", params_to_json(base.params)},
                          {"g", composite_to_json(base.g)},
                          {"histogram",
                           json{{"l", base.hist.l()},
                                {"counts", base.hist.counts()},
                                {"epsilons", eps},
                                {"sources", base.hist.sources()},
                                {"noised", base.hist.noised()}}}});
  }
  return json{{"type", "lsh-itables-model"},
              {"master_seed", model.master_seed},
              {"stats", stats_to_json(model.stats)},
              {"models", models}};
}

LshEnsembleModel lsh_model_from_json(const json& j) {
  LshEnsembleModel model;
  model.master_seed = j.at("master_seed").get<uint64_t>();
  model.stats = stats_from_json(j.at("stats"));
  for (const json& e : j.at("models")) {
    const json& h = e.at("histogram");
    Histogram hist = Histogram::from_parts(
        h.at("l").get<int>(), h.at("counts").get<std::vector<double>>(),
        h.at("epsilons").get<std::vector<double>>(), h.at("sources").get<int>(),
        h.at("noised").get<bool>());
    model.models.push_back(LshBaseModel{params_from_json(e.at("params")),
                                        composite_from_json(e.at("g")),
                                        std::move(hist)});
  }
  return model;
}

Transcript::Transcript(const std::string& path) : path_(path) {
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::trunc);  // start a fresh transcript
    if (!out) throw std::runtime_error("cannot open transcript file " + path_);
  }
}

void Transcript::log(const json& message) {
  messages_.push_back(message);
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    out << message.dump() << '\n';
  }
}

}  // namespace itables::wire
