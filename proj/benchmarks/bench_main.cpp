#include <benchmark/benchmark.h>

#include "accelsel/predictor.hpp"
#include "accelsel/selector.hpp"
#include "accelsel/simlab.hpp"

using namespace accelsel;

namespace {

History history(std::size_t n) {
  WorkloadSpec w;
  w.n_tasks = n;
  w.seed = 1;
  return generate_history(default_fleet(), w, {}, NoiseSpec{0.05, 2});
}

TrainingSet training(std::size_t n) {
  const History h = history(n);
  return build_training_set(h.tensor, h.tasks, all_method_descriptors(), default_fleet());
}

void BM_GenerateHistory(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(history(static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_GenerateHistory)->Arg(100)->Arg(500);

void BM_TrainGbdt(benchmark::State& state) {
  const TrainingSet set = training(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(train_meta_learner(set, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.size()));
}
BENCHMARK(BM_TrainGbdt)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const TrainedPredictor p = train_meta_learner(training(200), {});
  const auto task = sample_tasks(WorkloadSpec{})[0];
  const auto method = MethodDescriptor::of(MethodId::all_enabled);
  const auto hw = default_fleet()[2];
  for (auto _ : state) benchmark::DoNotOptimize(p.predict(task, method, hw));
}
BENCHMARK(BM_Predict);

void BM_SelectJoint(benchmark::State& state) {
  const TrainedPredictor p = train_meta_learner(training(200), {});
  SelectionRequest req;
  req.task = sample_tasks(WorkloadSpec{})[0];
  req.hardware = default_fleet();
  req.budget = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(select(p, req));
}
BENCHMARK(BM_SelectJoint);

}  // namespace

BENCHMARK_MAIN();
