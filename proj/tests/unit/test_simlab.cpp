#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "accelsel/errors.hpp"
#include "accelsel/io.hpp"
#include "accelsel/simlab.hpp"
#include "fixtures.hpp"

using namespace accelsel;
using accelsel::testing::make_gpu;
using accelsel::testing::make_task;

TEST_SUITE("simlab") {
  TEST_CASE("gpu scaling table") {
    CHECK(gpu_scaling_factor(1) == 1.0);
    CHECK(gpu_scaling_factor(0) == 0.05);
    CHECK(gpu_scaling_factor(8) / gpu_scaling_factor(4) == 1.05);
    CHECK(gpu_scaling_factor(2) == 1.8);
    // log2 interpolation: 3 GPUs sits at log2(3) between 2 and 4
    CHECK(gpu_scaling_factor(3) == doctest::Approx(1.8 + 1.2 * (std::log2(3.0) - 1.0)));
    CHECK(gpu_scaling_factor(16) == doctest::Approx(3.3));
    CHECK_THROWS_AS(gpu_scaling_factor(-1), ValidationError);
    for (std::int64_t g = 1; g < 64; ++g) CHECK(gpu_scaling_factor(g + 1) >= gpu_scaling_factor(g));
  }

  TEST_CASE("method speedups") {
    // Frozen from an independent Python evaluation of the formulas.
    CHECK(method_speedup(MethodId::baseline, make_task("a")) == 1.0);
    CHECK(method_speedup(MethodId::prefix_caching, make_task("a", 1, 1.0)) == 20.0);
    CHECK(method_speedup(MethodId::chunked_prefill, make_task("a")) == 1.15);
    CHECK(method_speedup(MethodId::continuous_batching, make_task("a", 4)) ==
          doctest::Approx(2.4100371689848545).epsilon(1e-14));
    CHECK(method_speedup(MethodId::all_enabled, make_task("a", 4, 0.5)) ==
          doctest::Approx(24.621460807466892).epsilon(1e-14));
    CHECK(method_speedup(MethodId::continuous_batching, make_task("a", 192)) ==
          doctest::Approx(12.970254973880003).epsilon(1e-14));
    CHECK(method_speedup(MethodId::all_enabled, make_task("a", 192, 0.5)) ==
          doctest::Approx(2.0951950342421544).epsilon(1e-14));
    CHECK(method_speedup(MethodId::all_enabled, make_task("a", 4, 0.5)) >
          method_speedup(MethodId::prefix_caching, make_task("a", 4, 0.5)));
  }

  TEST_CASE("speedup monotonicity") {
    double last = 0.0;
    for (std::int64_t b = 1; b <= 4096; ++b) {
      const double s = method_speedup(MethodId::continuous_batching, make_task("a", b));
      // strictly increasing until exp(-B/32) drops below double resolution
      if (b <= 1024) CHECK(s > last);
      CHECK(s >= last);
      CHECK(s <= 13.0);
      last = s;
    }
    last = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double s = method_speedup(MethodId::prefix_caching, make_task("a", 1, i / 100.0));
      CHECK(s > last);
      last = s;
    }
    for (std::int64_t b : {1, 64, 4096}) {
      for (MethodId m : kAllMethods) {
        const double s = method_speedup(m, make_task("a", b, 0.3));
        if (m == MethodId::all_enabled) {
          CHECK(s > 0.0);
        } else {
          CHECK(s >= 1.0);
        }
      }
    }
  }

  TEST_CASE("true metrics") {
    const auto task = make_task("a", 8, 0.2, 100, 20, 300, 3.0);
    const MetricVector m = true_metrics(task, MethodId::baseline, make_gpu("g", 1, 1.0));
    CHECK(m.throughput_tps == 1000.0);
    CHECK(m.runtime_s * m.throughput_tps == doctest::Approx(task.total_tokens()));
    CHECK(m.latency_s == doctest::Approx(120.0 / 1000.0 * 8.0));
    for (MethodId id : kAllMethods) {
      const double r = true_metrics(task, id, make_gpu("e", 8, 1.0)).throughput_tps /
                       true_metrics(task, id, make_gpu("f", 4, 1.0)).throughput_tps;
      CHECK(r == doctest::Approx(1.05).epsilon(1e-14));
    }
  }

  TEST_CASE("oracle crossover") {
    const auto methods = all_method_descriptors();
    const std::vector<HardwareProfile> one{make_gpu("g", 1, 1.0)};
    CHECK(oracle_select(make_task("a", 4, 0.5), methods, one, 1e9).method_id == MethodId::all_enabled);
    CHECK(oracle_select(make_task("a", 192, 0.5), methods, one, 1e9).method_id == MethodId::continuous_batching);
    CHECK_THROWS_AS(oracle_select(make_task("a", 4, 0.5), methods, one, 0.0001), NoFeasibleMethod);
  }

  TEST_CASE("task sampling") {
    WorkloadSpec w;
    w.n_tasks = 200;
    w.seed = 3;
    const auto a = sample_tasks(w);
    CHECK(a == sample_tasks(w));
    CHECK(a.front().task_id == "t00000");
    for (const auto& t : a) {
      CHECK(t.batch_size >= 1);
      CHECK(t.batch_size <= 256);
      CHECK(t.prefix_hit_ratio >= 0.0);
      CHECK(t.prefix_hit_ratio < 1.0);
      CHECK(t.mean_prompt_len >= 32);
      CHECK(t.num_requests <= 2000);
    }
    w.seed = 4;
    CHECK(a != sample_tasks(w));
    w.batch_size = Range{5, 5};
    CHECK_THROWS_AS(sample_tasks(w), ConfigError);
  }

  TEST_CASE("history generation") {
    WorkloadSpec w;
    w.n_tasks = 50;
    w.seed = 2;
    const auto fleet = default_fleet();
    const History clean = generate_history(fleet, w, {}, NoiseSpec{0.0, 9});
    CHECK(clean.tensor.size() == 1000);
    CHECK(clean.tensor.dims() == TensorDims{50, 5, 4});
    for (const auto& [key, m] : clean.tensor.records()) {
      const auto& task = *std::find_if(clean.tasks.begin(), clean.tasks.end(),
                                       [&](const TaskDescriptor& t) { return t.task_id == key.task_id; });
      const auto& hw = *std::find_if(fleet.begin(), fleet.end(),
                                     [&](const HardwareProfile& h) { return h.hw_id == key.hw_id; });
      CHECK(m == true_metrics(task, key.method_id, hw));
    }

    const History noisy1 = generate_history(fleet, w, {}, NoiseSpec{0.05, 9});
    const History noisy2 = generate_history(fleet, w, {}, NoiseSpec{0.05, 9});
    CHECK(history_to_text(noisy1.tasks, noisy1.tensor) == history_to_text(noisy2.tasks, noisy2.tensor));
    CHECK(noisy1.tensor != clean.tensor);
  }

  TEST_CASE("noise is median neutral") {
    WorkloadSpec w;
    w.n_tasks = 100;
    w.seed = 6;
    const auto fleet = default_fleet();
    const History clean = generate_history(fleet, w, {}, NoiseSpec{0.0, 0});
    const History noisy = generate_history(fleet, w, {}, NoiseSpec{0.05, 17});
    std::vector<double> ratios;
    for (const auto& [key, m] : noisy.tensor.records()) {
      ratios.push_back(m.throughput_tps / clean.tensor.records().at(key).throughput_tps);
      CHECK(m.runtime_s * m.throughput_tps == doctest::Approx(clean.tensor.records().at(key).runtime_s *
                                                              clean.tensor.records().at(key).throughput_tps));
    }
    REQUIRE(ratios.size() >= 1000);
    std::nth_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2), ratios.end());
    const double median = ratios[ratios.size() / 2];
    CHECK(median >= 0.98);
    CHECK(median <= 1.02);
  }

  TEST_CASE("noise does not depend on fleet order") {
    WorkloadSpec w;
    w.n_tasks = 10;
    auto fleet = default_fleet();
    const History a = generate_history(fleet, w, {}, NoiseSpec{0.1, 5});
    std::reverse(fleet.begin(), fleet.end());
    const History b = generate_history(fleet, w, {}, NoiseSpec{0.1, 5});
    CHECK(a.tensor == b.tensor);
  }
}
