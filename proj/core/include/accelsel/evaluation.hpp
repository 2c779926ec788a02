#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "accelsel/config.hpp"
#include "accelsel/predictor.hpp"
#include "accelsel/selector.hpp"

namespace accelsel {

// (oracle - selected) / oracle. Throws InternalError when selected > oracle,
// since that means the oracle was not the true maximum.
double regret(double oracle_throughput, double selected_true_throughput);

// Seeded uniform pick among the candidates with estimated_cost <= budget.
// The stream is derived from (seed, task_id) so picks do not depend on the
// order tasks are evaluated in. Throws NoFeasibleMethod when none is feasible.
SelectionDecision random_select(std::span<const CandidateEvaluation> candidates, double budget,
                                std::uint64_t seed, const std::string& task_id);

// Always `method`; among its feasible candidates the preferred one is taken.
SelectionDecision fixed_select(std::span<const CandidateEvaluation> candidates, double budget, MethodId method);

enum class RowStatus : std::uint8_t {
  ok,
  no_selection,       // the policy found nothing it considered feasible
  oracle_infeasible,  // nothing truly fits the budget; row not scored
};

std::string_view to_string(RowStatus status);

struct EvalRow {
  std::string task_id;
  PolicyKind policy = PolicyKind::oracle;
  RowStatus status = RowStatus::ok;
  std::optional<MethodId> method_id;
  std::string hw_id;
  double true_throughput_tps = 0.0;
  double oracle_throughput_tps = 0.0;
  double regret = 0.0;
  double estimated_cost = 0.0;  // what the policy believed
  double true_cost = 0.0;
  double budget = 0.0;
  bool budget_violated = false;        // estimated_cost > budget
  bool true_cost_over_budget = false;  // scored as regret 1
  bool top1 = false;                   // same (method, hw) as the oracle
};

struct PolicySummary {
  PolicyKind policy = PolicyKind::oracle;
  std::size_t tasks_scored = 0;
  double mean_regret = 0.0;
  double top1_accuracy = 0.0;
  double violation_rate = 0.0;
  double true_overrun_rate = 0.0;
  std::size_t no_selection = 0;
};

struct EvalReport {
  std::uint64_t seed = 0;
  std::string config_text;
  std::string config_digest;
  std::size_t training_rows = 0;
  std::size_t oracle_infeasible_tasks = 0;
  std::vector<EvalRow> rows;
  std::vector<PolicySummary> summaries;
  std::optional<PredictorReport> predictor;

  const PolicySummary& summary(PolicyKind policy) const;  // InternalError if absent
};

// Aggregates per policy over scored rows (status != oracle_infeasible).
std::vector<PolicySummary> summarize(std::span<const EvalRow> rows, std::span<const PolicyKind> policies);

// generate history -> train -> held-out tasks -> every policy -> score
// against the noiseless oracle. Deterministic per config.
EvalReport run_evaluation(const HarnessConfig& config);

// Variant that scores an already trained predictor on `tasks`.
EvalReport evaluate_policies(const HarnessConfig& config, const TrainedPredictor& predictor,
                             std::span<const TaskDescriptor> tasks);

std::string report_summary_text(const EvalReport& report);
std::string report_rows_csv(const EvalReport& report);
// Writes summary.json and rows.csv into `dir` (created if missing).
void write_report(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace accelsel
