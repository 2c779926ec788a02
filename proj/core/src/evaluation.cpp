#include "accelsel/evaluation.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>

#include "accelsel/errors.hpp"
#include "accelsel/io.hpp"
#include "accelsel/numfmt.hpp"
#include "accelsel/rng.hpp"
#include "accelsel/simlab.hpp"
#include "json_codec.hpp"

namespace accelsel {

double regret(double oracle_throughput, double selected_true_throughput) {
  if (!(oracle_throughput > 0.0) || !(selected_true_throughput > 0.0)) {
    throw ValidationError("regret needs positive throughputs");
  }
  if (selected_true_throughput > oracle_throughput) {
    throw InternalError("selected throughput " + format_sig9(selected_true_throughput) + " exceeds oracle " +
                        format_sig9(oracle_throughput));
  }
  return (oracle_throughput - selected_true_throughput) / oracle_throughput;
}

SelectionDecision random_select(std::span<const CandidateEvaluation> candidates, double budget,
                                std::uint64_t seed, const std::string& task_id) {
  std::vector<const CandidateEvaluation*> feasible;
  double min_cost = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    min_cost = std::min(min_cost, c.estimated_cost);
    if (c.estimated_cost <= budget) feasible.push_back(&c);
  }
  if (feasible.empty()) throw NoFeasibleMethod(min_cost, budget);
  Rng rng(mix_seed(seed, stable_hash(task_id)));
  const CandidateEvaluation& pick = *feasible[rng.below(feasible.size())];
  return SelectionDecision{pick.method_id,          pick.hw_id,         pick.predicted_throughput_tps,
                           pick.predicted_runtime_s, pick.estimated_cost, budget,
                           feasible.size()};
}

SelectionDecision fixed_select(std::span<const CandidateEvaluation> candidates, double budget, MethodId method) {
  std::vector<CandidateEvaluation> own;
  for (const auto& c : candidates) {
    if (c.method_id == method) own.push_back(c);
  }
  if (own.empty()) {
    throw ValidationError("fixed method '" + std::string(to_string(method)) + "' is not among the candidates");
  }
  return choose_best(own, budget);
}

std::string_view to_string(RowStatus status) {
  switch (status) {
    case RowStatus::ok: return "ok";
    case RowStatus::no_selection: return "no_selection";
    case RowStatus::oracle_infeasible: return "oracle_infeasible";
  }
  throw InternalError("unknown RowStatus");
}

const PolicySummary& EvalReport::summary(PolicyKind policy) const {
  for (const auto& s : summaries) {
    if (s.policy == policy) return s;
  }
  throw InternalError("report has no summary for policy '" + std::string(to_string(policy)) + "'");
}

std::vector<PolicySummary> summarize(std::span<const EvalRow> rows, std::span<const PolicyKind> policies) {
  std::vector<PolicySummary> out;
  for (PolicyKind policy : policies) {
    PolicySummary s;
    s.policy = policy;
    double regret_sum = 0.0;
    std::size_t top1 = 0, violations = 0, overruns = 0;
    for (const auto& r : rows) {
      if (r.policy != policy || r.status == RowStatus::oracle_infeasible) continue;
      ++s.tasks_scored;
      regret_sum += r.regret;
      top1 += r.top1 ? 1 : 0;
      violations += r.budget_violated ? 1 : 0;
      overruns += r.true_cost_over_budget ? 1 : 0;
      s.no_selection += r.status == RowStatus::no_selection ? 1 : 0;
    }
    if (s.tasks_scored > 0) {
      const double n = static_cast<double>(s.tasks_scored);
      s.mean_regret = regret_sum / n;
      s.top1_accuracy = static_cast<double>(top1) / n;
      s.violation_rate = static_cast<double>(violations) / n;
      s.true_overrun_rate = static_cast<double>(overruns) / n;
    }
    out.push_back(s);
  }
  return out;
}

namespace {

const CandidateEvaluation& truth_for(std::span<const CandidateEvaluation> truth, MethodId method,
                                     const std::string& hw_id) {
  for (const auto& c : truth) {
    if (c.method_id == method && c.hw_id == hw_id) return c;
  }
  throw InternalError("no ground truth for chosen candidate");
}

}  // namespace

EvalReport evaluate_policies(const HarnessConfig& config, const TrainedPredictor& predictor,
                             std::span<const TaskDescriptor> tasks) {
  const auto hardware = config.selection_hardware();
  const auto methods = all_method_descriptors();
  const double budget = config.selection.budget;

  EvalReport report;
  report.seed = config.seed;
  report.config_text = config_to_text(config);
  report.config_digest = config_digest(config);

  for (const auto& task : tasks) {
    const auto truth = oracle_candidates(task, methods, hardware, budget, config.ground_truth);
    std::optional<SelectionDecision> oracle;
    try {
      oracle = choose_best(truth, budget);
    } catch (const NoFeasibleMethod&) {
      ++report.oracle_infeasible_tasks;
    }
    if (oracle && oracle->estimated_cost > budget) throw InternalError("oracle decision exceeds budget");

    for (PolicyKind policy : config.policies) {
      EvalRow row;
      row.task_id = task.task_id;
      row.policy = policy;
      row.budget = budget;
      if (!oracle) {
        row.status = RowStatus::oracle_infeasible;
        report.rows.push_back(std::move(row));
        continue;
      }
      row.oracle_throughput_tps = oracle->predicted_throughput_tps;

      std::optional<SelectionDecision> decision;
      try {
        switch (policy) {
          case PolicyKind::oracle: decision = *oracle; break;
          case PolicyKind::meta:
            decision = choose_best(evaluate_candidates(predictor, task, methods, hardware, budget), budget);
            break;
          case PolicyKind::random:
            decision = random_select(truth, budget, config.random_policy_seed(), task.task_id);
            break;
          case PolicyKind::fixed: decision = fixed_select(truth, budget, config.fixed_method); break;
        }
      } catch (const NoFeasibleMethod&) {
        decision.reset();
      }

      if (!decision) {
        row.status = RowStatus::no_selection;
        row.regret = 1.0;
        report.rows.push_back(std::move(row));
        continue;
      }
      row.budget_violated = decision->estimated_cost > budget;
      if (row.budget_violated && (policy == PolicyKind::meta || policy == PolicyKind::oracle)) {
        throw InternalError("policy '" + std::string(to_string(policy)) + "' returned a decision over budget");
      }
      const CandidateEvaluation& chosen = truth_for(truth, decision->method_id, decision->hw_id);
      row.method_id = decision->method_id;
      row.hw_id = decision->hw_id;
      row.estimated_cost = decision->estimated_cost;
      row.true_throughput_tps = chosen.predicted_throughput_tps;
      row.true_cost = chosen.estimated_cost;
      row.true_cost_over_budget = chosen.estimated_cost > budget;
      row.regret = row.true_cost_over_budget ? 1.0 : regret(row.oracle_throughput_tps, row.true_throughput_tps);
      row.top1 = decision->method_id == oracle->method_id && decision->hw_id == oracle->hw_id;
      report.rows.push_back(std::move(row));
    }
  }
  report.summaries = summarize(report.rows, config.policies);
  return report;
}

EvalReport run_evaluation(const HarnessConfig& config) {
  config.validate();
  const auto methods = all_method_descriptors();
  const History history =
      generate_history(config.fleet, config.train_workload(), config.ground_truth, config.noise());
  const Embedder embedder(config.embedding);
  const TrainingSet training = build_training_set(history.tensor, history.tasks, methods, config.fleet, embedder);
  const TrainedPredictor predictor = train_meta_learner(training, config.predictor);

  const std::vector<TaskDescriptor> tasks =
      config.evaluate_on_training_tasks ? history.tasks : sample_tasks(config.heldout_workload());

  EvalReport report = evaluate_policies(config, predictor, tasks);
  report.training_rows = training.size();

  PerformanceTensor heldout_truth;
  for (const auto& task : tasks) {
    for (MethodId m : kAllMethods) {
      for (const auto& hw : config.fleet) {
        heldout_truth.insert(task, m, hw.hw_id, true_metrics(task, m, hw, config.ground_truth));
      }
    }
  }
  const TrainingSet heldout =
      build_training_set(heldout_truth, tasks, methods, config.fleet, embedder, &predictor.normalizer);
  report.predictor = evaluate_predictor(predictor, heldout);
  return report;
}

std::string report_summary_text(const EvalReport& report) {
  using codec::json;
  json policies = json::object();
  for (const auto& s : report.summaries) {
    policies[std::string(to_string(s.policy))] = json{{"tasks_scored", s.tasks_scored},
                                                      {"mean_regret", s.mean_regret},
                                                      {"top1_accuracy", s.top1_accuracy},
                                                      {"violation_rate", s.violation_rate},
                                                      {"true_overrun_rate", s.true_overrun_rate},
                                                      {"no_selection", s.no_selection}};
  }
  json doc{{"format", "accelsel-report"},
           {"format_version", 1},
           {"seed", report.seed},
           {"config_digest", report.config_digest},
           {"config", codec::parse_text(report.config_text)},
           {"training_rows", report.training_rows},
           {"oracle_infeasible_tasks", report.oracle_infeasible_tasks},
           {"policies", std::move(policies)}};
  if (report.predictor) {
    const auto& p = *report.predictor;
    doc["predictor"] = json{{"heldout_rows", p.rows},
                            {"rmse_log_throughput", p.rmse_log_throughput},
                            {"rmse_log_runtime", p.rmse_log_runtime},
                            {"baseline_rmse_log_throughput", p.baseline_rmse_log_throughput},
                            {"baseline_rmse_log_runtime", p.baseline_rmse_log_runtime}};
  }
  return doc.dump(2) + "\n";
}

std::string report_rows_csv(const EvalReport& report) {
  std::string out =
      "task_id,policy,status,method_id,hw_id,true_throughput_tps,oracle_throughput_tps,regret,estimated_cost,"
      "true_cost,budget,budget_violated,true_cost_over_budget,top1\n";
  for (const auto& r : report.rows) {
    out += r.task_id + ',' + std::string(to_string(r.policy)) + ',' + std::string(to_string(r.status)) + ',' +
           (r.method_id ? std::string(to_string(*r.method_id)) : std::string()) + ',' + r.hw_id + ',' +
           format_sig9(r.true_throughput_tps) + ',' + format_sig9(r.oracle_throughput_tps) + ',' +
           format_sig9(r.regret) + ',' + format_sig9(r.estimated_cost) + ',' + format_sig9(r.true_cost) + ',' +
           format_sig9(r.budget) + ',' + (r.budget_violated ? "1" : "0") + ',' +
           (r.true_cost_over_budget ? "1" : "0") + ',' + (r.top1 ? "1" : "0") + '\n';
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "summary.json", report_summary_text(report));
  write_file(dir / "rows.csv", report_rows_csv(report));
}

}  // namespace accelsel
