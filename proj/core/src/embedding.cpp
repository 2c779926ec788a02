#include "accelsel/embedding.hpp"

#include <cmath>

#include "accelsel/errors.hpp"
#include "accelsel/numfmt.hpp"
#include "accelsel/rng.hpp"

namespace accelsel {

namespace {

double as_real(std::int64_t v) { return static_cast<double>(v); }

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

FeatureVector embed_data(const TaskDescriptor& task) {
  return {{std::log(as_real(task.batch_size)), task.prefix_hit_ratio, std::log(as_real(task.mean_prompt_len)),
           std::log(as_real(task.mean_output_len)), std::log(as_real(task.num_requests)),
           std::log(task.request_rate)},
          std::string(schema::kData)};
}

FeatureVector embed_method(const MethodDescriptor& method) {
  FeatureVector v{std::vector<double>(kMethodDim, 0.0), std::string(schema::kMethod)};
  v.values[static_cast<std::size_t>(method.method_id)] = 1.0;
  v.values[5] = method.flags.batches_dynamically ? 1.0 : 0.0;
  v.values[6] = method.flags.reuses_prefix ? 1.0 : 0.0;
  v.values[7] = method.flags.precomputes_kv ? 1.0 : 0.0;
  return v;
}

FeatureVector embed_hardware(const HardwareProfile& hw) {
  return {{std::log1p(as_real(hw.gpu_count)), std::log1p(hw.vram_gb), std::log1p(hw.peak_tflops),
           std::log1p(hw.mem_bandwidth_gbs), hw.price_per_hour, hw.is_gpu() ? 1.0 : 0.0},
          std::string(schema::kHardware)};
}

std::string describe(const TaskDescriptor& task) {
  return "This workload comprises " + std::to_string(task.num_requests) + " requests served at batch size " +
         std::to_string(task.batch_size) + ", with a prefix hit ratio of " + format_fixed4(task.prefix_hit_ratio) +
         ", mean prompt length of " + std::to_string(task.mean_prompt_len) + " tokens, mean output length of " +
         std::to_string(task.mean_output_len) + " tokens, and an arrival rate of " +
         format_fixed4(task.request_rate) + " requests per second (task " + task.task_id + ").";
}

std::string describe(const MethodDescriptor& method) {
  return "This acceleration method is " + std::string(to_string(method.method_id)) +
         "; batches dynamically: " + yes_no(method.flags.batches_dynamically) +
         ", reuses prefix: " + yes_no(method.flags.reuses_prefix) +
         ", precomputes KV cache: " + yes_no(method.flags.precomputes_kv) + ".";
}

std::string describe(const HardwareProfile& hw) {
  return "This hardware node " + hw.hw_id + " has " + std::to_string(hw.gpu_count) + " GPUs with " +
         format_fixed4(hw.vram_gb) + " GB of GPU memory, " + format_fixed4(hw.peak_tflops) +
         " peak TFLOPS, " + format_fixed4(hw.mem_bandwidth_gbs) + " GB/s memory bandwidth, and costs " +
         format_fixed4(hw.price_per_hour) + " per hour.";
}

StubTextEmbedder::StubTextEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw ValidationError("text embedding dimension must be >= 1");
}

std::string StubTextEmbedder::provider_id() const { return "stub-fnv-v1-d" + std::to_string(dimension_); }

FeatureVector StubTextEmbedder::embed(std::string_view description) const {
  if (description.empty()) throw ValidationError("cannot embed empty text");
  Rng rng(stable_hash(description));
  std::vector<double> values(dimension_);
  double norm2 = 0.0;
  for (double& v : values) {
    v = rng.standard_normal();
    norm2 += v * v;
  }
  const double norm = std::sqrt(norm2);
  for (double& v : values) v /= norm;
  return {std::move(values), "text:" + provider_id()};
}

FeatureVector stub_text_embed(std::string_view description, std::size_t dimension) {
  return StubTextEmbedder(dimension).embed(description);
}

FeatureVector concat(std::span<const FeatureVector> parts) {
  FeatureVector out;
  for (const auto& p : parts) {
    if (!out.schema_id.empty()) out.schema_id += '|';
    out.schema_id += p.schema_id;
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
  }
  return out;
}

NormalizationStats fit_normalizer(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw ValidationError("cannot fit a normalizer on no vectors");
  const auto& first = vectors.front();
  const std::size_t dim = first.size();
  for (const auto& v : vectors) {
    if (v.schema_id != first.schema_id || v.size() != dim) {
      throw SchemaError("mixed schemas in normalizer input: '" + first.schema_id + "' vs '" + v.schema_id + "'");
    }
  }
  NormalizationStats stats{first.schema_id, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  const double n = static_cast<double>(vectors.size());
  for (const auto& v : vectors) {
    for (std::size_t d = 0; d < dim; ++d) stats.mean[d] += v.values[d];
  }
  for (double& m : stats.mean) m /= n;
  for (const auto& v : vectors) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double dev = v.values[d] - stats.mean[d];
      stats.stddev[d] += dev * dev;
    }
  }
  for (double& s : stats.stddev) s = std::sqrt(s / n);
  return stats;
}

void apply_normalizer_inplace(const NormalizationStats& stats, std::span<double> values) {
  for (std::size_t d = 0; d < values.size(); ++d) {
    if (stats.stddev[d] > 0.0) values[d] = (values[d] - stats.mean[d]) / stats.stddev[d];
  }
}

FeatureVector apply_normalizer(const NormalizationStats& stats, const FeatureVector& vector) {
  if (vector.schema_id != stats.schema_id || vector.size() != stats.mean.size()) {
    throw SchemaError("normalizer schema '" + stats.schema_id + "' does not match vector schema '" +
                      vector.schema_id + "'");
  }
  FeatureVector out = vector;
  apply_normalizer_inplace(stats, out.values);
  return out;
}

Embedder::Embedder(EmbeddingConfig config, std::shared_ptr<const TextEmbeddingProvider> provider)
    : config_(config), provider_(std::move(provider)) {
  if (config_.text && !provider_) provider_ = std::make_shared<StubTextEmbedder>(config_.text_dimension);
}

FeatureVector Embedder::with_text(FeatureVector classical, const std::string& description) const {
  if (!config_.text) return classical;
  FeatureVector text = provider_->embed(description);
  classical.values.insert(classical.values.end(), text.values.begin(), text.values.end());
  classical.schema_id += "+" + text.schema_id;
  return classical;
}

FeatureVector Embedder::data(const TaskDescriptor& task) const {
  return with_text(embed_data(task), config_.text ? describe(task) : std::string());
}

FeatureVector Embedder::method(const MethodDescriptor& method) const {
  return with_text(embed_method(method), config_.text ? describe(method) : std::string());
}

FeatureVector Embedder::hardware(const HardwareProfile& hw) const {
  return with_text(embed_hardware(hw), config_.text ? describe(hw) : std::string());
}

std::string Embedder::data_schema() const {
  return config_.text ? std::string(schema::kData) + "+text:" + provider_->provider_id() : std::string(schema::kData);
}

std::string Embedder::method_schema() const {
  return config_.text ? std::string(schema::kMethod) + "+text:" + provider_->provider_id()
                      : std::string(schema::kMethod);
}

std::string Embedder::hardware_schema() const {
  return config_.text ? std::string(schema::kHardware) + "+text:" + provider_->provider_id()
                      : std::string(schema::kHardware);
}

}  // namespace accelsel
