// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "accelsel/config.hpp"
#include "accelsel/errors.hpp"
#include "accelsel/evaluation.hpp"
#include "accelsel/io.hpp"
#include "accelsel/predictor.hpp"
#include "accelsel/selector.hpp"
#include "accelsel/simlab.hpp"
#include "cli.hpp"
#include "fixtures.hpp"

using namespace accelsel;
using accelsel::testing::make_gpu;
using accelsel::testing::make_task;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Shared between criteria 4, 5 and 6.
std::vector<EvalReport> g_seed_reports;
std::vector<EvalReport> g_memorization_reports;

// 1. Calibration anchors.
Outcome anchors() {
  Outcome o;
  const auto start = Clock::now();
  double sup = 0.0;
  for (std::int64_t b = 1; b <= 4096; ++b) {
    sup = std::max(sup, method_speedup(MethodId::continuous_batching, make_task("a", b)));
  }
  o.require(sup >= 12.9 && sup <= 13.0, "sup batching speedup " + num(sup) + " in [12.9, 13.0]");
  const double pc = method_speedup(MethodId::prefix_caching, make_task("a", 1, 1.0));
  o.require(pc == 20.0, "prefix caching at r=1 is " + num(pc));
  const double ratio = gpu_scaling_factor(8) / gpu_scaling_factor(4);
  o.require(ratio == 1.05, "gpu 8/4 ratio " + num(ratio));
  const double t = seconds_since(start);
  o.require(t < 1.0, "runtime " + num(t) + " s < 1 s");
  o.note("sup=" + num(sup) + " pc(1)=" + num(pc) + " ratio=" + num(ratio) + " time=" + num(t) + "s");
  return o;
}

// 2. Crossover.
Outcome crossover() {
  Outcome o;
  const auto start = Clock::now();
  const auto methods = all_method_descriptors();
  const std::vector<HardwareProfile> one{make_gpu("g", 1, 1.0)};
  const auto at4 = oracle_select(make_task("a", 4, 0.5), methods, one, 1e12).method_id;
  const auto at192 = oracle_select(make_task("a", 192, 0.5), methods, one, 1e12).method_id;
  o.require(at4 == MethodId::all_enabled, "argmax at B=4 is " + std::string(to_string(at4)));
  o.require(at192 == MethodId::continuous_batching, "argmax at B=192 is " + std::string(to_string(at192)));

  int changes = 0;
  int last_sign = 0;
  std::int64_t where = 0;
  for (std::int64_t b = 1; b <= 256; b *= 2) {
    const auto task = make_task("a", b, 0.5);
    double best_single = 0.0;
    for (MethodId m : {MethodId::baseline, MethodId::continuous_batching, MethodId::prefix_caching,
                       MethodId::chunked_prefill}) {
      best_single = std::max(best_single, method_speedup(m, task));
    }
    const double diff = method_speedup(MethodId::all_enabled, task) - best_single;
    const int sign = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
    if (last_sign != 0 && sign != 0 && sign != last_sign) {
      ++changes;
      where = b;
    }
    if (sign != 0) last_sign = sign;
  }
  o.require(changes == 1, "sign changes " + std::to_string(changes) + " == 1");
  const double t = seconds_since(start);
  o.require(t < 1.0, "runtime " + num(t) + " s < 1 s");
  o.note("sign changes=" + std::to_string(changes) + " (first negative at B=" + std::to_string(where) +
         ") time=" + num(t) + "s");
  return o;
}

// 3. Memorization regime.
Outcome memorization() {
  Outcome o;
  const auto start = Clock::now();
  HarnessConfig c;
  c.workload.n_tasks = 100;
  c.noise_sigma = 0.0;
  c.predictor.model_kind = ModelKind::knn;
  c.predictor.knn.k = 1;
  c.evaluate_on_training_tasks = true;
  c.policies = {PolicyKind::oracle, PolicyKind::meta};

  const auto methods = all_method_descriptors();
  const History h = generate_history(c.fleet, c.train_workload(), c.ground_truth, c.noise());
  const TrainedPredictor p =
      train_meta_learner(build_training_set(h.tensor, h.tasks, methods, c.fleet), c.predictor);

  std::size_t matched = 0, compared = 0, violations = 0;
  for (const auto& task : h.tasks) {
    SelectionRequest req;
    req.task = task;
    req.hardware = c.fleet;
    req.budget = c.selection.budget;
    std::optional<SelectionDecision> meta, oracle;
    try {
      meta = select(p, req);
    } catch (const NoFeasibleMethod&) {
    }
    try {
      oracle = oracle_select(task, methods, c.fleet, req.budget, c.ground_truth);
    } catch (const NoFeasibleMethod&) {
    }
    ++compared;
    if (meta && meta->estimated_cost > req.budget) ++violations;
    if (meta.has_value() == oracle.has_value() &&
        (!meta || (meta->method_id == oracle->method_id && meta->hw_id == oracle->hw_id))) {
      ++matched;
    }
  }
  g_memorization_reports.push_back(evaluate_policies(c, p, h.tasks));
  const PolicySummary& meta_summary = g_memorization_reports.back().summary(PolicyKind::meta);

  o.require(matched == compared, "matched " + std::to_string(matched) + "/" + std::to_string(compared));
  o.require(meta_summary.top1_accuracy == 1.0, "report top-1 " + num(meta_summary.top1_accuracy));
  o.require(violations == 0, std::to_string(violations) + " budget violations");
  const double t = seconds_since(start);
  o.require(t < 10.0, "runtime " + num(t) + " s < 10 s");
  o.note("matched " + std::to_string(matched) + "/" + std::to_string(compared) + " violations=" +
         std::to_string(violations) + " time=" + num(t) + "s");
  return o;
}

// 4. Generalization beats random.
Outcome generalization() {
  Outcome o;
  const auto start = Clock::now();
  double top1_sum = 0.0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    HarnessConfig c;
    c.seed = seed;
    g_seed_reports.push_back(run_evaluation(c));
    const EvalReport& r = g_seed_reports.back();
    const double meta = r.summary(PolicyKind::meta).mean_regret;
    const double random = r.summary(PolicyKind::random).mean_regret;
    const double top1 = r.summary(PolicyKind::meta).top1_accuracy;
    top1_sum += top1;
    o.require(meta <= 0.5 * random, "seed " + std::to_string(seed) + " meta regret " + num(meta) + " <= 0.5 x " +
                                        num(random));
    per_seed << " s" << seed << "(meta=" << num(meta) << " random=" << num(random) << " top1=" << num(top1) << ")";
  }
  const double mean_top1 = top1_sum / 5.0;
  o.require(mean_top1 >= 0.60, "mean top-1 " + num(mean_top1) + " >= 0.60");
  const double t = seconds_since(start);
  o.require(t < 60.0, "runtime " + num(t) + " s < 60 s");
  o.note("mean top1=" + num(mean_top1) + per_seed.str() + " time=" + num(t) + "s");
  return o;
}

// 5. Predictor quality.
Outcome predictor_quality() {
  Outcome o;
  std::ostringstream per_seed;
  o.require(g_seed_reports.size() == 5, "criterion 4 produced 5 seed reports");
  for (std::size_t i = 0; i < g_seed_reports.size(); ++i) {
    const auto& p = g_seed_reports[i].predictor;
    if (!p) {
      o.require(false, "seed report without predictor metrics");
      continue;
    }
    o.require(p->rmse_log_throughput < p->baseline_rmse_log_throughput,
              "seed " + std::to_string(i + 1) + " rmse " + num(p->rmse_log_throughput) + " < baseline " +
                  num(p->baseline_rmse_log_throughput));
    per_seed << " s" << i + 1 << "(" << num(p->rmse_log_throughput) << " vs " << num(p->baseline_rmse_log_throughput)
             << ")";
  }

  WorkloadSpec w;
  w.n_tasks = 10;  // 10 tasks x 5 methods x 4 nodes = 200 rows
  w.seed = 77;
  const History h = generate_history(default_fleet(), w, {}, NoiseSpec{0.05, 78});
  const TrainingSet set = build_training_set(h.tensor, h.tasks, all_method_descriptors(), default_fleet());
  o.require(set.size() == 200, "fixed set has " + std::to_string(set.size()) + " rows");
  const GbdtModel m = fit_gbdt(set.inputs, set.log_throughput, GbdtParams{});
  std::size_t increases = 0;
  for (std::size_t i = 1; i < m.loss_curve.size(); ++i) increases += m.loss_curve[i] > m.loss_curve[i - 1] ? 1 : 0;
  o.require(increases == 0, std::to_string(increases) + " loss increases");
  o.note("heldout rmse vs baseline:" + per_seed.str() + "; loss " + num(m.loss_curve.front()) + " -> " +
         num(m.loss_curve.back()) + " over " + std::to_string(m.loss_curve.size() - 1) + " rounds, non-increasing");
  return o;
}

// 6. Budget safety.
Outcome budget_safety() {
  Outcome o;
  std::size_t rows = 0, row_violations = 0;
  for (const auto* reports : {&g_seed_reports, &g_memorization_reports}) {
    for (const auto& r : *reports) {
      for (const auto& row : r.rows) {
        if (row.policy != PolicyKind::meta && row.policy != PolicyKind::oracle) continue;
        if (row.status != RowStatus::ok) continue;
        ++rows;
        row_violations += (row.budget_violated || row.estimated_cost > row.budget) ? 1 : 0;
      }
    }
  }
  o.require(rows > 0, "criteria 3-4 produced decision rows");
  o.require(row_violations == 0, std::to_string(row_violations) + " violating rows");

  WorkloadSpec w;
  w.n_tasks = 100;
  w.seed = 91;
  const auto fleet = default_fleet();
  const auto methods = all_method_descriptors();
  const History h = generate_history(fleet, w, {}, NoiseSpec{0.05, 92});
  const TrainedPredictor p = train_meta_learner(build_training_set(h.tensor, h.tasks, methods, fleet), {});

  Rng rng(93);
  std::size_t calls = 0, decisions = 0, infeasible = 0, violations = 0, silent = 0, wrong_error = 0;
  for (int i = 0; i < 12000; ++i) {
    SelectionRequest req;
    req.task = make_task("fz" + std::to_string(i), 1 + static_cast<std::int64_t>(rng.below(512)), rng.uniform01(),
                         16 + static_cast<std::int64_t>(rng.below(2048)), 4 + static_cast<std::int64_t>(rng.below(512)),
                         50 + static_cast<std::int64_t>(rng.below(5000)), rng.uniform(0.5, 100));
    req.budget = std::exp(rng.uniform(std::log(1e-7), std::log(10.0)));
    std::vector<HardwareProfile> catalog;
    for (const auto& hw : fleet) {
      if (rng.below(3) != 0) catalog.push_back(hw);
    }
    if (catalog.empty()) catalog.push_back(fleet[rng.below(fleet.size())]);
    if (catalog.size() == 1 && rng.below(2) == 0) {
      req.hardware = catalog.front();
    } else {
      req.hardware = catalog;
    }
    const auto candidates = evaluate_candidates(p, req.task, req.methods, req.hardware_list(), req.budget);
    const bool any_feasible =
        std::any_of(candidates.begin(), candidates.end(), [&](const auto& c) { return c.estimated_cost <= req.budget; });
    ++calls;
    try {
      const SelectionDecision d = select(p, req);
      ++decisions;
      violations += d.estimated_cost > req.budget ? 1 : 0;
      silent += any_feasible ? 0 : 1;
    } catch (const NoFeasibleMethod& e) {
      ++infeasible;
      wrong_error += (any_feasible || !(e.min_cost() > req.budget)) ? 1 : 0;
    }
  }
  o.require(calls >= 10000, std::to_string(calls) + " fuzz calls >= 10000");
  o.require(violations == 0, std::to_string(violations) + " fuzz decisions over budget");
  o.require(silent == 0, std::to_string(silent) + " all-infeasible cases returned a decision");
  o.require(wrong_error == 0, std::to_string(wrong_error) + " spurious NoFeasibleMethod");
  o.require(decisions > 0 && infeasible > 0, "fuzz exercised both outcomes");
  o.note("harness rows=" + std::to_string(rows) + " violations=" + std::to_string(row_violations) + "; fuzz calls=" +
         std::to_string(calls) + " decisions=" + std::to_string(decisions) + " infeasible=" +
         std::to_string(infeasible) + " violations=" + std::to_string(violations));
  return o;
}

// 7. Determinism.
Outcome determinism() {
  Outcome o;
  accelsel::testing::TempDir dir("acceptance");
  write_file(dir / "config.json", config_to_text(HarnessConfig{}));
  const std::string cfg = (dir / "config.json").string();
  std::vector<std::string> files[2];
  for (int run = 0; run < 2; ++run) {
    const std::string tag = std::to_string(run);
    const std::string hist = (dir / ("h" + tag + ".jsonl")).string();
    const std::string model = (dir / ("m" + tag + ".mpk")).string();
    const std::string report = (dir / ("r" + tag)).string();
    std::ostringstream out, err;
    const int gen = cli::run({"accelsel", "gen", "--config", cfg, "--out", hist}, out, err);
    const int train = cli::run({"accelsel", "train", "--history", hist, "--config", cfg, "--out", model}, out, err);
    const int eval = cli::run({"accelsel", "eval", "--config", cfg, "--out", report}, out, err);
    o.require(gen == 0 && train == 0 && eval == 0, "cli exit codes " + std::to_string(gen) + "/" +
                                                       std::to_string(train) + "/" + std::to_string(eval) + " " +
                                                       err.str());
    if (gen || train || eval) return o;
    files[run] = {read_file(hist), read_file(model), read_file(report + "/summary.json"),
                  read_file(report + "/rows.csv")};
  }
  const char* names[] = {"history", "model", "summary.json", "rows.csv"};
  for (std::size_t i = 0; i < 4; ++i) {
    o.require(!files[0][i].empty() && files[0][i] == files[1][i], std::string(names[i]) + " byte-identical");
  }

  const TrainedPredictor before = load_model((dir / "m0.mpk").string());
  save_model(before, dir / "resaved.mpk");
  const TrainedPredictor after = load_model(dir / "resaved.mpk");
  Rng rng(7);
  std::size_t equal = 0;
  const std::size_t cols = before.normalizer.mean.size();
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(cols);
    for (double& v : x) v = rng.uniform(-3.0, 3.0);
    equal += before.predict_log_normalized(x) == after.predict_log_normalized(x) ? 1 : 0;
  }
  o.require(equal == 100, std::to_string(equal) + "/100 bit-equal predictions after save/load");
  o.note("gen/train/eval outputs byte-identical across two runs; " + std::to_string(equal) +
         "/100 predictions bit-equal after round-trip");
  return o;
}

// 8. Selector algebra on predictor-produced candidate sets.
Outcome selector_properties() {
  Outcome o;
  WorkloadSpec w;
  w.n_tasks = 100;
  w.seed = 101;
  const auto fleet = default_fleet();
  const auto methods = all_method_descriptors();
  const History h = generate_history(fleet, w, {}, NoiseSpec{0.05, 102});
  const TrainedPredictor p = train_meta_learner(build_training_set(h.tensor, h.tasks, methods, fleet), {});
  Rng rng(103);

  const auto random_task = [&](int i) {
    return make_task("p" + std::to_string(i), 1 + static_cast<std::int64_t>(rng.below(256)), rng.uniform01(),
                     32 + static_cast<std::int64_t>(rng.below(1000)), 8 + static_cast<std::int64_t>(rng.below(250)),
                     100 + static_cast<std::int64_t>(rng.below(1900)), rng.uniform(1, 50));
  };
  const auto same = [](const SelectionDecision& a, const SelectionDecision& b) {
    return a.method_id == b.method_id && a.hw_id == b.hw_id;
  };
  const auto try_best = [](std::span<const CandidateEvaluation> c, double budget) -> std::optional<SelectionDecision> {
    try {
      return choose_best(c, budget);
    } catch (const NoFeasibleMethod&) {
      return std::nullopt;
    }
  };

  std::size_t scale_n = 0, scale_bad = 0, iia_n = 0, iia_bad = 0, mono_n = 0, mono_bad = 0, oracle_mono_bad = 0;
  while (scale_n < 1000 || iia_n < 1000 || mono_n < 1000) {
    const auto task = random_task(static_cast<int>(scale_n + iia_n + mono_n));
    const double budget = std::exp(rng.uniform(std::log(1e-4), std::log(0.2)));
    const auto c = evaluate_candidates(p, task, methods, fleet, budget);
    const auto base = try_best(c, budget);

    // positive scaling
    auto scaled = c;
    const double factor = std::exp(rng.uniform(-10.0, 10.0));
    for (auto& x : scaled) x.predicted_throughput_tps *= factor;
    const auto s = try_best(scaled, budget);
    ++scale_n;
    scale_bad += (base.has_value() != s.has_value() || (base && !same(*base, *s))) ? 1 : 0;

    // irrelevant alternatives
    if (base) {
      ++iia_n;
      std::vector<std::size_t> others;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (!(c[k].method_id == base->method_id && c[k].hw_id == base->hw_id)) others.push_back(k);
      }
      auto fewer = c;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(others[rng.below(others.size())]));
      auto more = c;
      more.push_back(CandidateEvaluation{MethodId::all_enabled, "phantom", 1e12, 1.0,
                                         budget * (1.0 + rng.uniform(1e-6, 10.0)), false});
      const auto f = try_best(fewer, budget);
      const auto m = try_best(more, budget);
      iia_bad += (!f || !same(*f, *base) || !m || !same(*m, *base)) ? 1 : 0;
    }

    // monotone budget: objective value of the selection, and the oracle's true value
    {
      ++mono_n;
      std::vector<double> budgets;
      for (int k = 0; k < 8; ++k) budgets.push_back(std::exp(rng.uniform(std::log(1e-5), std::log(1.0))));
      std::sort(budgets.begin(), budgets.end());
      const auto truth = oracle_candidates(task, methods, fleet, 0.0);
      double last = 0.0, last_true = 0.0;
      bool bad = false;
      for (double b : budgets) {
        if (const auto d = try_best(c, b)) {
          bad = bad || d->predicted_throughput_tps < last;
          last = d->predicted_throughput_tps;
        } else {
          bad = bad || last > 0.0;
        }
        if (const auto d = try_best(truth, b)) {
          oracle_mono_bad += d->predicted_throughput_tps < last_true ? 1 : 0;
          last_true = d->predicted_throughput_tps;
        }
      }
      mono_bad += bad ? 1 : 0;
    }
  }
  o.require(scale_bad == 0, std::to_string(scale_bad) + " scaling changes");
  o.require(iia_bad == 0, std::to_string(iia_bad) + " irrelevant-alternative changes");
  o.require(mono_bad == 0 && oracle_mono_bad == 0,
            std::to_string(mono_bad) + "/" + std::to_string(oracle_mono_bad) + " monotonicity breaks");
  o.note("scaling " + std::to_string(scale_n) + " instances, IIA " + std::to_string(iia_n) + ", budget sweeps " +
         std::to_string(mono_n) + "; zero property violations");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"calibration anchors", anchors},
      {"crossover", crossover},
      {"memorization matches oracle", memorization},
      {"generalization beats random", generalization},
      {"predictor quality", predictor_quality},
      {"budget safety", budget_safety},
      {"determinism", determinism},
      {"selector properties", selector_properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("CRITERION %zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
