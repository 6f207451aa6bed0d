#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "itables/countmin.hpp"
#include "itables/ensemble.hpp"
#include "itables/hashing.hpp"
#include "itables/histogram.hpp"

namespace itables::wire {

using nlohmann::json;

// epsilon is written as a number, or the string "inf" for non-private
json epsilon_to_json(double epsilon);
double epsilon_from_json(const json& j);

json stats_to_json(const FeatureStats& stats);
FeatureStats stats_from_json(const json& j);

// flat record: l, then (dimension, cut) pairs in order
json composite_to_json(const CompositeHash& g);
CompositeHash composite_from_json(const json& j);

json params_to_json(const BaseModelParams& p);
BaseModelParams params_from_json(const json& j);

// what a participant broadcasts for one base model
json histogram_release(const Histogram& hist, int participant_id, int model_id);
Histogram histogram_from_release(const json& j);

json sketch_release(const CountMinSketch& sketch, int participant_id, int model_id);
CountMinSketch sketch_from_release(const json& j);

// what the coordinator broadcasts before training starts
json lsh_hash_spec(const LshSharedSpec& spec);
LshSharedSpec lsh_hash_spec_from_json(const json& j);

json rsh_hash_spec(const RshSharedSpec& spec);
RshSharedSpec rsh_hash_spec_from_json(const json& j);

// full trained-model bundle (stats + per-model params/hash/histogram)
json lsh_model_to_json(const LshEnsembleModel& model);
LshEnsembleModel lsh_model_from_json(const json& j);

// Ordered log of every message exchanged in a collaboration run; optionally
// mirrored to a JSON-lines file for audit/replay.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(const std::string& path);

  void log(const json& message);
  const std::vector<json>& messages() const { return messages_; }

 private:
  std::string path_;
  std::vector<json> messages_;
};

}  // namespace itables::wire
