#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace accelsel {

// A serving workload. Ids are case-sensitive and unique within a history.
struct TaskDescriptor {
  std::string task_id;
  std::int64_t batch_size = 1;
  double prefix_hit_ratio = 0.0;
  std::int64_t mean_prompt_len = 1;
  std::int64_t mean_output_len = 1;
  std::int64_t num_requests = 1;
  double request_rate = 1.0;

  // num_requests * (mean_prompt_len + mean_output_len)
  double total_tokens() const;
  void validate() const;

  friend bool operator==(const TaskDescriptor&, const TaskDescriptor&) = default;
};

// Closed set, in one-hot order.
enum class MethodId : std::uint8_t {
  baseline,
  continuous_batching,
  prefix_caching,
  chunked_prefill,
  all_enabled,
};

inline constexpr std::size_t kMethodCount = 5;

inline constexpr std::array<MethodId, kMethodCount> kAllMethods = {
    MethodId::baseline, MethodId::continuous_batching, MethodId::prefix_caching,
    MethodId::chunked_prefill, MethodId::all_enabled};

std::string_view to_string(MethodId id);
MethodId parse_method_id(std::string_view name);  // throws ValidationError

struct MethodFlags {
  bool batches_dynamically = false;
  bool reuses_prefix = false;
  bool precomputes_kv = false;

  friend bool operator==(const MethodFlags&, const MethodFlags&) = default;
};

struct MethodDescriptor {
  MethodId method_id = MethodId::baseline;
  MethodFlags flags;

  // Flags are a pure function of the id; this is the only way to build one.
  static MethodDescriptor of(MethodId id);

  friend bool operator==(const MethodDescriptor&, const MethodDescriptor&) = default;
};

std::vector<MethodDescriptor> all_method_descriptors();

struct HardwareProfile {
  std::string hw_id;
  std::int64_t gpu_count = 0;
  double vram_gb = 0.0;
  double peak_tflops = 0.0;
  double mem_bandwidth_gbs = 0.0;
  double price_per_hour = 1.0;

  bool is_gpu() const { return gpu_count > 0; }
  void validate() const;

  friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;
};

struct MetricVector {
  double throughput_tps = 1.0;
  double latency_s = 1.0;
  double runtime_s = 1.0;

  void validate() const;

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

// The quantity selection maximizes. Runtime feeds the cost constraint and
// latency is informational.
inline double scalar_objective(const MetricVector& m) { return m.throughput_tps; }

struct RecordKey {
  std::string task_id;
  MethodId method_id = MethodId::baseline;
  std::string hw_id;

  friend auto operator<=>(const RecordKey& a, const RecordKey& b) {
    return std::tie(a.task_id, a.method_id, a.hw_id) <=> std::tie(b.task_id, b.method_id, b.hw_id);
  }
  friend bool operator==(const RecordKey&, const RecordKey&) = default;
};

struct TensorDims {
  std::size_t tasks = 0;
  std::size_t methods = 0;
  std::size_t hardware = 0;

  friend bool operator==(const TensorDims&, const TensorDims&) = default;
};

// Sparse (task, method, hardware) -> MetricVector store. Index lists keep
// first-insertion order and define the nominal n x m x h shape.
class PerformanceTensor {
 public:
  enum class Overwrite : bool { no = false, yes = true };

  void insert(const TaskDescriptor& task, MethodId method, const std::string& hw_id,
              const MetricVector& metrics, Overwrite overwrite = Overwrite::no);
  void insert(const RecordKey& key, const MetricVector& metrics, Overwrite overwrite = Overwrite::no);

  std::optional<MetricVector> lookup(const std::string& task_id, MethodId method,
                                     const std::string& hw_id) const;

  TensorDims dims() const { return {task_index_.size(), method_index_.size(), hw_index_.size()}; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const std::map<RecordKey, MetricVector>& records() const { return records_; }
  const std::vector<std::string>& task_index() const { return task_index_; }
  const std::vector<MethodId>& method_index() const { return method_index_; }
  const std::vector<std::string>& hw_index() const { return hw_index_; }

  // Record-set equality; index order is not compared.
  friend bool operator==(const PerformanceTensor& a, const PerformanceTensor& b) {
    return a.records_ == b.records_;
  }

 private:
  std::map<RecordKey, MetricVector> records_;
  std::vector<std::string> task_index_;
  std::vector<MethodId> method_index_;
  std::vector<std::string> hw_index_;
  std::set<std::string> task_seen_;
  std::set<MethodId> method_seen_;
  std::set<std::string> hw_seen_;
};

struct SelectionDecision {
  MethodId method_id = MethodId::baseline;
  std::string hw_id;
  double predicted_throughput_tps = 0.0;
  double predicted_runtime_s = 0.0;
  double estimated_cost = 0.0;
  double budget = 0.0;
  std::size_t feasible_count = 0;

  friend bool operator==(const SelectionDecision&, const SelectionDecision&) = default;
};

}  // namespace accelsel
