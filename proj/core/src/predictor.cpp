#include "accelsel/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "accelsel/errors.hpp"

namespace accelsel {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::gbdt ? "gbdt" : "knn"; }

ModelKind parse_model_kind(std::string_view name) {
  if (name == "gbdt") return ModelKind::gbdt;
  if (name == "knn") return ModelKind::knn;
  throw ConfigError("unknown model_kind '" + std::string(name) + "'");
}

void PredictorConfig::validate() const {
  gbdt.validate();
  if (knn.k < 1) throw ConfigError("knn.k must be >= 1");
}

TrainingSet build_training_set(const PerformanceTensor& tensor, std::span<const TaskDescriptor> tasks,
                               std::span<const MethodDescriptor> methods,
                               std::span<const HardwareProfile> hardware, const Embedder& embedder,
                               const NormalizationStats* normalizer) {
  if (tensor.empty()) throw EmptyHistory("performance tensor has no records");

  std::map<std::string, FeatureVector, std::less<>> task_emb;
  for (const auto& t : tasks) task_emb.emplace(t.task_id, embedder.data(t));
  std::map<MethodId, FeatureVector> method_emb;
  for (const auto& m : methods) method_emb.emplace(m.method_id, embedder.method(m));
  std::map<std::string, FeatureVector, std::less<>> hw_emb;
  for (const auto& h : hardware) hw_emb.emplace(h.hw_id, embedder.hardware(h));

  TrainingSet set;
  set.embedding = embedder.config();
  set.data_schema = embedder.data_schema();
  set.method_schema = embedder.method_schema();
  set.hardware_schema = embedder.hardware_schema();

  std::vector<FeatureVector> raw;
  raw.reserve(tensor.size());
  for (const auto& [key, metrics] : tensor.records()) {
    auto t = task_emb.find(key.task_id);
    if (t == task_emb.end()) throw MissingDescriptor("no task descriptor for '" + key.task_id + "'");
    auto m = method_emb.find(key.method_id);
    if (m == method_emb.end()) {
      throw MissingDescriptor("no method descriptor for '" + std::string(to_string(key.method_id)) + "'");
    }
    auto h = hw_emb.find(key.hw_id);
    if (h == hw_emb.end()) throw MissingDescriptor("no hardware profile for '" + key.hw_id + "'");
    const FeatureVector parts[] = {t->second, m->second, h->second};
    raw.push_back(concat(parts));
    set.log_throughput.push_back(std::log(metrics.throughput_tps));
    set.log_runtime.push_back(std::log(metrics.runtime_s));
    set.keys.push_back(key);
  }

  set.normalizer = normalizer ? *normalizer : fit_normalizer(raw);
  for (const auto& v : raw) set.inputs.append_row(apply_normalizer(set.normalizer, v).values);
  return set;
}

namespace {

RegressionHead fit_head(const TrainingSet& training, std::span<const double> targets, const PredictorConfig& config,
                        const std::vector<std::uint32_t>& tie_rank) {
  if (config.model_kind == ModelKind::gbdt) return fit_gbdt(training.inputs, targets, config.gbdt);
  return fit_knn(training.inputs, std::vector<double>(targets.begin(), targets.end()), tie_rank, config.knn.k);
}

double head_predict(const RegressionHead& head, std::span<const double> x) {
  return std::visit([&](const auto& model) { return model.predict(x); }, head);
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

void check_schema(const std::string& expected, const FeatureVector& got, const char* role) {
  if (got.schema_id != expected) {
    throw SchemaError(std::string(role) + " embedding schema '" + got.schema_id + "' does not match trained '" +
                      expected + "'");
  }
}

}  // namespace

TrainedPredictor train_meta_learner(const TrainingSet& training, const PredictorConfig& config) {
  config.validate();
  const std::size_t n = training.size();
  if (config.model_kind == ModelKind::gbdt && n < 2) {
    throw InsufficientData("gbdt needs at least 2 training rows, got " + std::to_string(n));
  }
  if (config.model_kind == ModelKind::knn && n < config.knn.k) {
    throw InsufficientData("knn needs at least k=" + std::to_string(config.knn.k) + " rows, got " +
                           std::to_string(n));
  }

  std::vector<std::uint32_t> tie_rank(n);
  if (config.model_kind == ModelKind::knn) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return training.keys[a] < training.keys[b]; });
    for (std::uint32_t r = 0; r < n; ++r) tie_rank[order[r]] = r;
  }

  TrainedPredictor p;
  p.config = config;
  p.embedding = training.embedding;
  p.data_schema = training.data_schema;
  p.method_schema = training.method_schema;
  p.hardware_schema = training.hardware_schema;
  p.normalizer = training.normalizer;
  p.throughput_head = fit_head(training, training.log_throughput, config, tie_rank);
  p.runtime_head = fit_head(training, training.log_runtime, config, tie_rank);
  p.row_count = n;
  p.mean_log_throughput = mean(training.log_throughput);
  p.mean_log_runtime = mean(training.log_runtime);
  return p;
}

std::pair<double, double> TrainedPredictor::predict_log_normalized(std::span<const double> normalized) const {
  return {head_predict(throughput_head, normalized), head_predict(runtime_head, normalized)};
}

Prediction TrainedPredictor::predict(const FeatureVector& data, const FeatureVector& method,
                                     const FeatureVector& hardware) const {
  check_schema(data_schema, data, "data");
  check_schema(method_schema, method, "method");
  check_schema(hardware_schema, hardware, "hardware");
  const FeatureVector parts[] = {data, method, hardware};
  FeatureVector x = apply_normalizer(normalizer, concat(parts));
  const auto [log_tp, log_rt] = predict_log_normalized(x.values);
  return {std::exp(log_tp), std::exp(log_rt)};
}

Prediction TrainedPredictor::predict(const TaskDescriptor& task, const MethodDescriptor& method,
                                     const HardwareProfile& hw) const {
  const Embedder e = embedder();
  return predict(e.data(task), e.method(method), e.hardware(hw));
}

PredictorReport evaluate_predictor(const TrainedPredictor& predictor, const TrainingSet& heldout) {
  if (heldout.size() == 0) throw ValidationError("held-out set is empty");
  if (heldout.normalizer != predictor.normalizer || heldout.data_schema != predictor.data_schema ||
      heldout.method_schema != predictor.method_schema || heldout.hardware_schema != predictor.hardware_schema) {
    throw SchemaError("held-out set was not embedded with the predictor's schema and normalizer");
  }
  PredictorReport r;
  r.rows = heldout.size();
  double se_tp = 0.0, se_rt = 0.0, base_tp = 0.0, base_rt = 0.0;
  for (std::size_t i = 0; i < heldout.size(); ++i) {
    const auto [tp, rt] = predictor.predict_log_normalized(heldout.inputs.row(i));
    const double ytp = heldout.log_throughput[i];
    const double yrt = heldout.log_runtime[i];
    se_tp += (tp - ytp) * (tp - ytp);
    se_rt += (rt - yrt) * (rt - yrt);
    base_tp += (predictor.mean_log_throughput - ytp) * (predictor.mean_log_throughput - ytp);
    base_rt += (predictor.mean_log_runtime - yrt) * (predictor.mean_log_runtime - yrt);
  }
  const double n = static_cast<double>(heldout.size());
  r.rmse_log_throughput = std::sqrt(se_tp / n);
  r.rmse_log_runtime = std::sqrt(se_rt / n);
  r.baseline_rmse_log_throughput = std::sqrt(base_tp / n);
  r.baseline_rmse_log_runtime = std::sqrt(base_rt / n);
  return r;
}

}  // namespace accelsel
