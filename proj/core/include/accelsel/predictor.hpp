#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "accelsel/domain.hpp"
#include "accelsel/embedding.hpp"
#include "accelsel/gbdt.hpp"
#include "accelsel/knn.hpp"
#include "accelsel/matrix.hpp"

namespace accelsel {

enum class ModelKind : std::uint8_t { gbdt, knn };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);  // throws ConfigError

struct KnnParams {
  std::size_t k = 5;

  friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

struct PredictorConfig {
  ModelKind model_kind = ModelKind::gbdt;
  GbdtParams gbdt;
  KnnParams knn;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const PredictorConfig&, const PredictorConfig&) = default;
};

// Embedded history: row i is normalize(data ++ method ++ hardware) for
// keys[i], with natural-log targets.
struct TrainingSet {
  DenseMatrix inputs;
  std::vector<double> log_throughput;
  std::vector<double> log_runtime;
  std::vector<RecordKey> keys;
  NormalizationStats normalizer;
  EmbeddingConfig embedding;
  std::string data_schema;
  std::string method_schema;
  std::string hardware_schema;

  std::size_t size() const { return keys.size(); }
};

// One row per stored record, in record-key order. When `normalizer` is given
// (held-out sets) it is reused instead of fitted.
TrainingSet build_training_set(const PerformanceTensor& tensor, std::span<const TaskDescriptor> tasks,
                               std::span<const MethodDescriptor> methods,
                               std::span<const HardwareProfile> hardware, const Embedder& embedder = Embedder{},
                               const NormalizationStats* normalizer = nullptr);

using RegressionHead = std::variant<GbdtModel, KnnModel>;

struct Prediction {
  double throughput_tps = 0.0;
  double runtime_s = 0.0;
};

struct TrainedPredictor {
  PredictorConfig config;
  EmbeddingConfig embedding;
  std::string data_schema;
  std::string method_schema;
  std::string hardware_schema;
  NormalizationStats normalizer;
  RegressionHead throughput_head;  // log throughput
  RegressionHead runtime_head;     // log runtime
  std::size_t row_count = 0;
  double mean_log_throughput = 0.0;
  double mean_log_runtime = 0.0;

  // Checks each embedding's schema against the trained one (SchemaError).
  Prediction predict(const FeatureVector& data, const FeatureVector& method, const FeatureVector& hardware) const;
  Prediction predict(const TaskDescriptor& task, const MethodDescriptor& method, const HardwareProfile& hw) const;
  // Raw log-space head outputs for an already normalized input row.
  std::pair<double, double> predict_log_normalized(std::span<const double> normalized) const;

  Embedder embedder() const { return Embedder(embedding); }
};

// Trains both heads independently on the same rows. Deterministic for a fixed
// (row order, config).
TrainedPredictor train_meta_learner(const TrainingSet& training, const PredictorConfig& config);

struct PredictorReport {
  double rmse_log_throughput = 0.0;
  double rmse_log_runtime = 0.0;
  // Constant predictor at the training-set mean target.
  double baseline_rmse_log_throughput = 0.0;
  double baseline_rmse_log_runtime = 0.0;
  std::size_t rows = 0;
};

PredictorReport evaluate_predictor(const TrainedPredictor& predictor, const TrainingSet& heldout);

// Versioned JSON document; see docs/model_format.md.
inline constexpr int kModelFormatVersion = 1;

std::string model_to_text(const TrainedPredictor& predictor);
TrainedPredictor model_from_text(const std::string& text);
void save_model(const TrainedPredictor& predictor, const std::filesystem::path& path);
TrainedPredictor load_model(const std::filesystem::path& path);

}  // namespace accelsel
