#pragma once

// Private JSON mapping for the domain types. nlohmann/json orders object keys
// lexicographically and renders doubles in shortest round-trip form, which the
// persisted formats rely on for byte-stable output.

#include <json.hpp>
#include <string>

#include "accelsel/domain.hpp"
#include "accelsel/embedding.hpp"
#include "accelsel/errors.hpp"
#include "accelsel/predictor.hpp"

namespace accelsel::codec {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <typename T>
T get_field_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_field<T>(j, key);
}

json task_to_json(const TaskDescriptor& t);
TaskDescriptor task_from_json(const json& j);  // validates

json hardware_to_json(const HardwareProfile& h);
HardwareProfile hardware_from_json(const json& j);  // validates

json metrics_to_json(const MetricVector& m);

json decision_to_json(const SelectionDecision& d);

json predictor_config_to_json(const PredictorConfig& c);
PredictorConfig predictor_config_from_json(const json& j, const PredictorConfig& defaults = {});

json embedding_config_to_json(const EmbeddingConfig& c);
EmbeddingConfig embedding_config_from_json(const json& j, const EmbeddingConfig& defaults = {});

json parse_text(const std::string& text);  // ParseError on malformed input

}  // namespace accelsel::codec
