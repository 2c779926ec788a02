#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "accelsel/domain.hpp"
#include "accelsel/selector.hpp"

namespace accelsel {

// Parametric stand-in for measured serving performance on heterogeneous
// nodes. The defaults pin three anchors: batching saturates at 13x, prefix
// reuse at full hit ratio gives 20x, and 8 GPUs deliver 1.05x of 4 GPUs.
struct GroundTruthParams {
  double base_tps = 1000.0;  // one GPU, baseline method
  std::map<std::int64_t, double> gpu_scaling = {{1, 1.0}, {2, 1.8}, {4, 3.0}, {8, 3.15}};
  double cpu_factor = 0.05;
  double cb_max_gain = 12.0;
  double cb_rate = 32.0;
  double pc_max_gain = 19.0;
  double chunk_gain = 0.15;
  double interference_scale = 24.0;

  void validate() const;

  friend bool operator==(const GroundTruthParams&, const GroundTruthParams&) = default;
};

// Lognormal multiplicative throughput noise; sigma = 0 is noiseless.
struct NoiseSpec {
  double sigma = 0.05;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Range&, const Range&) = default;
};

// Integer-valued fields and the request rate are drawn log-uniformly, the
// prefix hit ratio uniformly.
struct WorkloadSpec {
  std::size_t n_tasks = 500;
  Range batch_size{1, 256};
  Range prefix_hit_ratio{0, 1};
  Range prompt_len{32, 1024};
  Range output_len{8, 256};
  Range num_requests{100, 2000};
  Range request_rate{1, 50};
  std::uint64_t seed = 0;
  std::string id_prefix = "t";

  void validate() const;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

std::vector<HardwareProfile> default_fleet();

// Table lookup; counts between table entries interpolate linearly in
// log2(count), counts past the last entry extrapolate the last segment.
// 0 GPUs -> cpu_factor. Negative -> ValidationError.
double gpu_scaling_factor(std::int64_t gpu_count, const GroundTruthParams& params = {});

double method_speedup(MethodId method, const TaskDescriptor& task, const GroundTruthParams& params = {});

// Builds a consistent MetricVector from a throughput: runtime = tokens / tps,
// latency = (prompt + output) / tps * batch.
MetricVector metrics_from_throughput(const TaskDescriptor& task, double throughput_tps);

MetricVector true_metrics(const TaskDescriptor& task, MethodId method, const HardwareProfile& hw,
                          const GroundTruthParams& params = {});

std::vector<TaskDescriptor> sample_tasks(const WorkloadSpec& spec);

struct History {
  std::vector<TaskDescriptor> tasks;
  PerformanceTensor tensor;
};

// Every (task, method, hardware) triple, with per-triple noise drawn from
// seed ^ hash(key) so the result does not depend on evaluation order.
History generate_history(std::span<const HardwareProfile> fleet, const WorkloadSpec& workload,
                         const GroundTruthParams& params = {}, const NoiseSpec& noise = {});

// Candidates scored with noiseless ground truth and true cost.
std::vector<CandidateEvaluation> oracle_candidates(const TaskDescriptor& task,
                                                   std::span<const MethodDescriptor> methods,
                                                   std::span<const HardwareProfile> hardware, double budget,
                                                   const GroundTruthParams& params = {});

// Brute-force argmax with the selector's filter and tie-break.
SelectionDecision oracle_select(const TaskDescriptor& task, std::span<const MethodDescriptor> methods,
                                std::span<const HardwareProfile> hardware, double budget,
                                const GroundTruthParams& params = {});

}  // namespace accelsel
