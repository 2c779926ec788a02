#include "accelsel/domain.hpp"

#include <cmath>

#include "accelsel/errors.hpp"
#include "accelsel/numfmt.hpp"

namespace accelsel {

NoFeasibleMethod::NoFeasibleMethod(double min_cost, double budget)
    : Error("no candidate fits budget " + format_sig9(budget) + "; minimum estimated cost is " +
            format_sig9(min_cost)),
      min_cost_(min_cost),
      budget_(budget) {}

double TaskDescriptor::total_tokens() const {
  return static_cast<double>(num_requests) * static_cast<double>(mean_prompt_len + mean_output_len);
}

void TaskDescriptor::validate() const {
  if (task_id.empty()) throw ValidationError("task_id must be non-empty");
  const auto fail = [&](const char* what) {
    throw ValidationError("task '" + task_id + "': " + what);
  };
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!(prefix_hit_ratio >= 0.0 && prefix_hit_ratio <= 1.0)) fail("prefix_hit_ratio must lie in [0,1]");
  if (mean_prompt_len < 1) fail("mean_prompt_len must be >= 1");
  if (mean_output_len < 1) fail("mean_output_len must be >= 1");
  if (num_requests < 1) fail("num_requests must be >= 1");
  if (!(request_rate > 0.0) || !std::isfinite(request_rate)) fail("request_rate must be finite and > 0");
}

std::string_view to_string(MethodId id) {
  switch (id) {
    case MethodId::baseline: return "baseline";
    case MethodId::continuous_batching: return "continuous_batching";
    case MethodId::prefix_caching: return "prefix_caching";
    case MethodId::chunked_prefill: return "chunked_prefill";
    case MethodId::all_enabled: return "all_enabled";
  }
  throw InternalError("unknown MethodId");
}

MethodId parse_method_id(std::string_view name) {
  for (MethodId id : kAllMethods) {
    if (to_string(id) == name) return id;
  }
  throw ValidationError("unknown method_id '" + std::string(name) + "'");
}

MethodDescriptor MethodDescriptor::of(MethodId id) {
  MethodDescriptor d;
  d.method_id = id;
  switch (id) {
    case MethodId::baseline: break;
    case MethodId::continuous_batching: d.flags.batches_dynamically = true; break;
    case MethodId::prefix_caching:
      d.flags.reuses_prefix = true;
      d.flags.precomputes_kv = true;
      break;
    case MethodId::chunked_prefill: d.flags.precomputes_kv = true; break;
    case MethodId::all_enabled: d.flags = {true, true, true}; break;
  }
  return d;
}

std::vector<MethodDescriptor> all_method_descriptors() {
  std::vector<MethodDescriptor> out;
  for (MethodId id : kAllMethods) out.push_back(MethodDescriptor::of(id));
  return out;
}

void HardwareProfile::validate() const {
  if (hw_id.empty()) throw ValidationError("hw_id must be non-empty");
  const auto fail = [&](const char* what) {
    throw ValidationError("hardware '" + hw_id + "': " + what);
  };
  if (gpu_count < 0) fail("gpu_count must be >= 0");
  for (double v : {vram_gb, peak_tflops, mem_bandwidth_gbs}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail("capacity fields must be finite and >= 0");
  }
  if (gpu_count == 0 && vram_gb != 0.0) fail("CPU-only node must have vram_gb = 0");
  if (!(price_per_hour > 0.0) || !std::isfinite(price_per_hour)) fail("price_per_hour must be finite and > 0");
}

void MetricVector::validate() const {
  for (double v : {throughput_tps, latency_s, runtime_s}) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ValidationError("metric values must be finite and > 0");
    }
  }
}

void PerformanceTensor::insert(const TaskDescriptor& task, MethodId method, const std::string& hw_id,
                               const MetricVector& metrics, Overwrite overwrite) {
  insert(RecordKey{task.task_id, method, hw_id}, metrics, overwrite);
}

void PerformanceTensor::insert(const RecordKey& key, const MetricVector& metrics, Overwrite overwrite) {
  metrics.validate();
  if (key.task_id.empty() || key.hw_id.empty()) throw ValidationError("record ids must be non-empty");
  auto it = records_.find(key);
  if (it != records_.end()) {
    if (overwrite == Overwrite::no) {
      throw DuplicateRecord("duplicate record (" + key.task_id + ", " + std::string(to_string(key.method_id)) +
                            ", " + key.hw_id + ")");
    }
    it->second = metrics;
    return;
  }
  records_.emplace(key, metrics);
  if (task_seen_.insert(key.task_id).second) task_index_.push_back(key.task_id);
  if (method_seen_.insert(key.method_id).second) method_index_.push_back(key.method_id);
  if (hw_seen_.insert(key.hw_id).second) hw_index_.push_back(key.hw_id);
}

std::optional<MetricVector> PerformanceTensor::lookup(const std::string& task_id, MethodId method,
                                                      const std::string& hw_id) const {
  auto it = records_.find(RecordKey{task_id, method, hw_id});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

}  // namespace accelsel
