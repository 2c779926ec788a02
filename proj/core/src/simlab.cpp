#include "accelsel/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "accelsel/errors.hpp"
#include "accelsel/numfmt.hpp"
#include "accelsel/rng.hpp"

namespace accelsel {

void GroundTruthParams::validate() const {
  if (!(base_tps > 0.0)) throw ConfigError("ground_truth.base_tps must be > 0");
  if (gpu_scaling.empty()) throw ConfigError("ground_truth.gpu_scaling must be non-empty");
  for (const auto& [count, factor] : gpu_scaling) {
    if (count < 1) throw ConfigError("ground_truth.gpu_scaling keys must be >= 1");
    if (!(factor > 0.0)) throw ConfigError("ground_truth.gpu_scaling values must be > 0");
  }
  if (!(cpu_factor > 0.0)) throw ConfigError("ground_truth.cpu_factor must be > 0");
  if (!(cb_max_gain >= 0.0) || !(cb_rate > 0.0)) throw ConfigError("ground_truth batching parameters invalid");
  if (!(pc_max_gain >= 0.0) || !(chunk_gain >= 0.0)) throw ConfigError("ground_truth gain parameters invalid");
  if (!(interference_scale > 0.0)) throw ConfigError("ground_truth.interference_scale must be > 0");
}

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise.sigma must be finite and >= 0");
}

void WorkloadSpec::validate() const {
  if (n_tasks < 1) throw ConfigError("workload.n_tasks must be >= 1");
  const auto check = [](const Range& r, const char* name, double floor) {
    if (!(r.lo < r.hi) || r.lo < floor) {
      throw ConfigError(std::string("workload.") + name + " must satisfy " + format_sig9(floor) + " <= lo < hi");
    }
  };
  check(batch_size, "batch_size", 1);
  check(prefix_hit_ratio, "prefix_hit_ratio", 0);
  if (prefix_hit_ratio.hi > 1.0) throw ConfigError("workload.prefix_hit_ratio must lie in [0,1]");
  check(prompt_len, "prompt_len", 1);
  check(output_len, "output_len", 1);
  check(num_requests, "num_requests", 1);
  check(request_rate, "request_rate", 1e-9);
  if (id_prefix.empty()) throw ConfigError("workload.id_prefix must be non-empty");
}

std::vector<HardwareProfile> default_fleet() {
  return {
      {"cpu-32c", 0, 0.0, 2.0, 200.0, 0.2},
      {"gpu-1x24g", 1, 24.0, 121.0, 300.0, 0.8},
      {"gpu-4x24g", 4, 96.0, 484.0, 1200.0, 3.2},
      {"gpu-8x24g", 8, 192.0, 968.0, 2400.0, 6.4},
  };
}

double gpu_scaling_factor(std::int64_t gpu_count, const GroundTruthParams& params) {
  if (gpu_count < 0) throw ValidationError("gpu_count must be >= 0");
  if (gpu_count == 0) return params.cpu_factor;
  const auto& table = params.gpu_scaling;
  if (auto it = table.find(gpu_count); it != table.end()) return it->second;

  const double x = std::log2(static_cast<double>(gpu_count));
  auto upper = table.upper_bound(gpu_count);
  if (table.size() == 1) return table.begin()->second;
  std::map<std::int64_t, double>::const_iterator lo, hi;
  if (upper == table.begin()) {
    lo = table.begin();
    hi = std::next(lo);
  } else if (upper == table.end()) {
    hi = std::prev(table.end());
    lo = std::prev(hi);
  } else {
    hi = upper;
    lo = std::prev(upper);
  }
  const double x0 = std::log2(static_cast<double>(lo->first));
  const double x1 = std::log2(static_cast<double>(hi->first));
  const double factor = lo->second + (hi->second - lo->second) * (x - x0) / (x1 - x0);
  return std::max(factor, params.cpu_factor);
}

double method_speedup(MethodId method, const TaskDescriptor& task, const GroundTruthParams& params) {
  const double b = static_cast<double>(task.batch_size);
  const double r = task.prefix_hit_ratio;
  const auto batching = [&] { return 1.0 + params.cb_max_gain * (1.0 - std::exp(-b / params.cb_rate)); };
  const auto prefix = [&] { return 1.0 + params.pc_max_gain * r; };
  switch (method) {
    case MethodId::baseline: return 1.0;
    case MethodId::continuous_batching: return batching();
    case MethodId::prefix_caching: return prefix();
    case MethodId::chunked_prefill: return 1.0 + params.chunk_gain;
    case MethodId::all_enabled: {
      const double ratio = b / params.interference_scale;
      const double interference = 1.0 / (1.0 + ratio * ratio);
      return batching() * prefix() * interference;
    }
  }
  throw InternalError("unknown method");
}

MetricVector metrics_from_throughput(const TaskDescriptor& task, double throughput_tps) {
  MetricVector m;
  m.throughput_tps = throughput_tps;
  m.runtime_s = task.total_tokens() / throughput_tps;
  m.latency_s = static_cast<double>(task.mean_prompt_len + task.mean_output_len) / throughput_tps *
                static_cast<double>(task.batch_size);
  return m;
}

MetricVector true_metrics(const TaskDescriptor& task, MethodId method, const HardwareProfile& hw,
                          const GroundTruthParams& params) {
  const double tps = params.base_tps * gpu_scaling_factor(hw.gpu_count, params) * method_speedup(method, task, params);
  return metrics_from_throughput(task, tps);
}

namespace {

double log_uniform(Rng& rng, const Range& r) { return std::exp(rng.uniform(std::log(r.lo), std::log(r.hi))); }

std::int64_t log_uniform_int(Rng& rng, const Range& r) {
  const double v = std::round(log_uniform(rng, r));
  return static_cast<std::int64_t>(std::clamp(v, std::ceil(r.lo), std::floor(r.hi)));
}

std::string task_id(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", i);
  return prefix + buf;
}

}  // namespace

std::vector<TaskDescriptor> sample_tasks(const WorkloadSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<TaskDescriptor> tasks;
  tasks.reserve(spec.n_tasks);
  for (std::size_t i = 0; i < spec.n_tasks; ++i) {
    TaskDescriptor t;
    t.task_id = task_id(spec.id_prefix, i);
    t.batch_size = log_uniform_int(rng, spec.batch_size);
    t.prefix_hit_ratio = rng.uniform(spec.prefix_hit_ratio.lo, spec.prefix_hit_ratio.hi);
    t.mean_prompt_len = log_uniform_int(rng, spec.prompt_len);
    t.mean_output_len = log_uniform_int(rng, spec.output_len);
    t.num_requests = log_uniform_int(rng, spec.num_requests);
    t.request_rate = log_uniform(rng, spec.request_rate);
    t.validate();
    tasks.push_back(std::move(t));
  }
  return tasks;
}

History generate_history(std::span<const HardwareProfile> fleet, const WorkloadSpec& workload,
                         const GroundTruthParams& params, const NoiseSpec& noise) {
  params.validate();
  noise.validate();
  for (const auto& hw : fleet) hw.validate();
  History h;
  h.tasks = sample_tasks(workload);
  for (const auto& task : h.tasks) {
    for (MethodId method : kAllMethods) {
      for (const auto& hw : fleet) {
        MetricVector m = true_metrics(task, method, hw, params);
        if (noise.sigma > 0.0) {
          const std::string key = task.task_id + '\0' + std::string(to_string(method)) + '\0' + hw.hw_id;
          Rng rng(noise.seed ^ stable_hash(key));
          m = metrics_from_throughput(task, m.throughput_tps * std::exp(noise.sigma * rng.standard_normal()));
        }
        h.tensor.insert(task, method, hw.hw_id, m);
      }
    }
  }
  return h;
}

std::vector<CandidateEvaluation> oracle_candidates(const TaskDescriptor& task,
                                                   std::span<const MethodDescriptor> methods,
                                                   std::span<const HardwareProfile> hardware, double budget,
                                                   const GroundTruthParams& params) {
  std::vector<CandidateEvaluation> out;
  out.reserve(methods.size() * hardware.size());
  for (const auto& hw : hardware) {
    for (const auto& m : methods) {
      const MetricVector truth = true_metrics(task, m.method_id, hw, params);
      CandidateEvaluation c;
      c.method_id = m.method_id;
      c.hw_id = hw.hw_id;
      c.predicted_throughput_tps = scalar_objective(truth);
      c.predicted_runtime_s = truth.runtime_s;
      c.estimated_cost = estimate_cost(hw, truth.runtime_s);
      c.feasible = c.estimated_cost <= budget;
      out.push_back(std::move(c));
    }
  }
  return out;
}

SelectionDecision oracle_select(const TaskDescriptor& task, std::span<const MethodDescriptor> methods,
                                std::span<const HardwareProfile> hardware, double budget,
                                const GroundTruthParams& params) {
  const auto candidates = oracle_candidates(task, methods, hardware, budget, params);
  return choose_best(candidates, budget);
}

}  // namespace accelsel
