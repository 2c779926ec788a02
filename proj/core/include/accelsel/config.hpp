#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "accelsel/domain.hpp"
#include "accelsel/embedding.hpp"
#include "accelsel/predictor.hpp"
#include "accelsel/simlab.hpp"

namespace accelsel {

enum class SelectionMode : std::uint8_t { fixed, joint };
enum class PolicyKind : std::uint8_t { oracle, meta, random, fixed };

std::string_view to_string(SelectionMode mode);
std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);  // throws ConfigError

struct SelectionConfig {
  SelectionMode mode = SelectionMode::joint;
  std::string hw_id;  // fixed mode only
  double budget = 0.02;
};

// Everything a gen/train/eval run depends on. Environment variables are never
// consulted; one master seed derives every stream.
struct HarnessConfig {
  std::uint64_t seed = 1;
  WorkloadSpec workload;  // seed and id_prefix are derived, not read
  std::size_t heldout_tasks = 100;
  bool evaluate_on_training_tasks = false;
  std::vector<HardwareProfile> fleet = default_fleet();
  GroundTruthParams ground_truth;
  double noise_sigma = 0.05;
  PredictorConfig predictor;
  EmbeddingConfig embedding;
  SelectionConfig selection;
  std::vector<PolicyKind> policies = {PolicyKind::oracle, PolicyKind::meta, PolicyKind::random, PolicyKind::fixed};
  MethodId fixed_method = MethodId::all_enabled;

  void validate() const;  // ConfigError

  WorkloadSpec train_workload() const;
  WorkloadSpec heldout_workload() const;
  NoiseSpec noise() const;
  std::uint64_t random_policy_seed() const;
  // The hardware a selection ranges over: the fleet (joint) or one node.
  std::vector<HardwareProfile> selection_hardware() const;
};

// Canonical JSON rendering (sorted keys, two-space indent).
std::string config_to_text(const HarnessConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
HarnessConfig config_from_text(const std::string& text);
HarnessConfig load_config(const std::filesystem::path& path);
// FNV-1a over config_to_text, as 16 hex digits.
std::string config_digest(const HarnessConfig& config);

}  // namespace accelsel
