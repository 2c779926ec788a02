#include "json_codec.hpp"

namespace accelsel {

namespace codec {

json task_to_json(const TaskDescriptor& t) {
  return json{{"task_id", t.task_id},
              {"batch_size", t.batch_size},
              {"prefix_hit_ratio", t.prefix_hit_ratio},
              {"mean_prompt_len", t.mean_prompt_len},
              {"mean_output_len", t.mean_output_len},
              {"num_requests", t.num_requests},
              {"request_rate", t.request_rate}};
}

TaskDescriptor task_from_json(const json& j) {
  TaskDescriptor t;
  t.task_id = get_field<std::string>(j, "task_id");
  t.batch_size = get_field<std::int64_t>(j, "batch_size");
  t.prefix_hit_ratio = get_field<double>(j, "prefix_hit_ratio");
  t.mean_prompt_len = get_field<std::int64_t>(j, "mean_prompt_len");
  t.mean_output_len = get_field<std::int64_t>(j, "mean_output_len");
  t.num_requests = get_field<std::int64_t>(j, "num_requests");
  t.request_rate = get_field<double>(j, "request_rate");
  t.validate();
  return t;
}

json hardware_to_json(const HardwareProfile& h) {
  return json{{"hw_id", h.hw_id},
              {"gpu_count", h.gpu_count},
              {"vram_gb", h.vram_gb},
              {"peak_tflops", h.peak_tflops},
              {"mem_bandwidth_gbs", h.mem_bandwidth_gbs},
              {"price_per_hour", h.price_per_hour}};
}

HardwareProfile hardware_from_json(const json& j) {
  HardwareProfile h;
  h.hw_id = get_field<std::string>(j, "hw_id");
  h.gpu_count = get_field<std::int64_t>(j, "gpu_count");
  h.vram_gb = get_field<double>(j, "vram_gb");
  h.peak_tflops = get_field<double>(j, "peak_tflops");
  h.mem_bandwidth_gbs = get_field<double>(j, "mem_bandwidth_gbs");
  h.price_per_hour = get_field<double>(j, "price_per_hour");
  h.validate();
  return h;
}

json metrics_to_json(const MetricVector& m) {
  return json{{"throughput_tps", m.throughput_tps}, {"latency_s", m.latency_s}, {"runtime_s", m.runtime_s}};
}

json decision_to_json(const SelectionDecision& d) {
  return json{{"method_id", std::string(to_string(d.method_id))},
              {"hw_id", d.hw_id},
              {"predicted_throughput_tps", d.predicted_throughput_tps},
              {"predicted_runtime_s", d.predicted_runtime_s},
              {"estimated_cost", d.estimated_cost},
              {"budget", d.budget},
              {"feasible_count", d.feasible_count}};
}

json predictor_config_to_json(const PredictorConfig& c) {
  return json{{"model_kind", std::string(to_string(c.model_kind))},
              {"gbdt",
               {{"rounds", c.gbdt.rounds},
                {"max_depth", c.gbdt.max_depth},
                {"learning_rate", c.gbdt.learning_rate},
                {"min_samples_leaf", c.gbdt.min_samples_leaf}}},
              {"knn", {{"k", c.knn.k}}},
              {"seed", c.seed}};
}

PredictorConfig predictor_config_from_json(const json& j, const PredictorConfig& defaults) {
  PredictorConfig c = defaults;
  if (j.contains("model_kind")) c.model_kind = parse_model_kind(get_field<std::string>(j, "model_kind"));
  if (j.contains("gbdt")) {
    const json& g = j.at("gbdt");
    c.gbdt.rounds = get_field_or(g, "rounds", c.gbdt.rounds);
    c.gbdt.max_depth = get_field_or(g, "max_depth", c.gbdt.max_depth);
    c.gbdt.learning_rate = get_field_or(g, "learning_rate", c.gbdt.learning_rate);
    c.gbdt.min_samples_leaf = get_field_or(g, "min_samples_leaf", c.gbdt.min_samples_leaf);
  }
  if (j.contains("knn")) c.knn.k = get_field_or(j.at("knn"), "k", c.knn.k);
  c.seed = get_field_or(j, "seed", c.seed);
  return c;
}

json embedding_config_to_json(const EmbeddingConfig& c) {
  return json{{"text", c.text}, {"text_dimension", c.text_dimension}};
}

EmbeddingConfig embedding_config_from_json(const json& j, const EmbeddingConfig& defaults) {
  EmbeddingConfig c = defaults;
  c.text = get_field_or(j, "text", c.text);
  c.text_dimension = get_field_or(j, "text_dimension", c.text_dimension);
  return c;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace codec

}  // namespace accelsel
