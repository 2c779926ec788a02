#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "accelsel/domain.hpp"

namespace accelsel {

// Fixed-layout numeric description of a task, method or hardware profile.
// Vectors with equal schema_id are index-aligned.
struct FeatureVector {
  std::vector<double> values;
  std::string schema_id;

  std::size_t size() const { return values.size(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

namespace schema {
inline constexpr std::string_view kData = "data-v1";
inline constexpr std::string_view kMethod = "method-v1";
inline constexpr std::string_view kHardware = "hw-v1";
inline constexpr std::string_view kDescribe = "describe-v1";
}  // namespace schema

inline constexpr std::size_t kDataDim = 6;
inline constexpr std::size_t kMethodDim = 8;
inline constexpr std::size_t kHardwareDim = 6;

// [log B, r, log prompt, log output, log requests, log rate]
FeatureVector embed_data(const TaskDescriptor& task);
// one-hot(5) ++ [batches_dynamically, reuses_prefix, precomputes_kv]
FeatureVector embed_method(const MethodDescriptor& method);
// [log1p gpus, log1p vram, log1p tflops, log1p bandwidth, price, is_gpu]
FeatureVector embed_hardware(const HardwareProfile& hw);

// Canonical one-sentence descriptions (template version schema::kDescribe).
// Integers print plain, reals with 4 decimals.
std::string describe(const TaskDescriptor& task);
std::string describe(const MethodDescriptor& method);
std::string describe(const HardwareProfile& hw);

class TextEmbeddingProvider {
 public:
  virtual ~TextEmbeddingProvider() = default;

  // Must be deterministic: equal text yields an identical vector.
  virtual FeatureVector embed(std::string_view description) const = 0;
  virtual std::string provider_id() const = 0;
  virtual std::size_t dimension() const = 0;
};

// Stands in for a language-model encoder. Text -> FNV-1a seed -> d standard
// normal draws -> L2 normalized. Identical output on every platform.
class StubTextEmbedder final : public TextEmbeddingProvider {
 public:
  explicit StubTextEmbedder(std::size_t dimension = 64);

  FeatureVector embed(std::string_view description) const override;
  std::string provider_id() const override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::size_t dimension_;
};

FeatureVector stub_text_embed(std::string_view description, std::size_t dimension = 64);

// Joins vectors; the schema id records the parts in order, joined by '|'.
FeatureVector concat(std::span<const FeatureVector> parts);

// Per-dimension z-scoring. A dimension with std == 0 is passed through as is.
struct NormalizationStats {
  std::string schema_id;
  std::vector<double> mean;
  std::vector<double> stddev;

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

// Population moments. Throws SchemaError on mixed schemas or lengths and
// ValidationError on an empty list.
NormalizationStats fit_normalizer(std::span<const FeatureVector> vectors);
FeatureVector apply_normalizer(const NormalizationStats& stats, const FeatureVector& vector);
// In-place variant on raw values, no schema check.
void apply_normalizer_inplace(const NormalizationStats& stats, std::span<double> values);

struct EmbeddingConfig {
  // Append stub text embeddings of each entity's description to its classical
  // features.
  bool text = false;
  std::size_t text_dimension = 64;

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

// Produces the three per-entity embeddings under a given configuration.
class Embedder {
 public:
  explicit Embedder(EmbeddingConfig config = {},
                    std::shared_ptr<const TextEmbeddingProvider> provider = nullptr);

  FeatureVector data(const TaskDescriptor& task) const;
  FeatureVector method(const MethodDescriptor& method) const;
  FeatureVector hardware(const HardwareProfile& hw) const;

  std::string data_schema() const;
  std::string method_schema() const;
  std::string hardware_schema() const;

  const EmbeddingConfig& config() const { return config_; }

 private:
  FeatureVector with_text(FeatureVector classical, const std::string& description) const;

  EmbeddingConfig config_;
  std::shared_ptr<const TextEmbeddingProvider> provider_;
};

}  // namespace accelsel
