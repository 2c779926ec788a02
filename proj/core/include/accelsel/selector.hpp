#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "accelsel/domain.hpp"
#include "accelsel/predictor.hpp"

namespace accelsel {

struct CandidateEvaluation {
  MethodId method_id = MethodId::baseline;
  std::string hw_id;
  double predicted_throughput_tps = 0.0;
  double predicted_runtime_s = 0.0;
  double estimated_cost = 0.0;
  bool feasible = false;  // estimated_cost <= budget

  friend bool operator==(const CandidateEvaluation&, const CandidateEvaluation&) = default;
};

// `hardware` holds a single profile (fixed mode) or a catalog (joint mode).
struct SelectionRequest {
  TaskDescriptor task;
  std::variant<HardwareProfile, std::vector<HardwareProfile>> hardware;
  std::vector<MethodDescriptor> methods = all_method_descriptors();
  double budget = 0.0;

  bool joint() const { return std::holds_alternative<std::vector<HardwareProfile>>(hardware); }
  std::vector<HardwareProfile> hardware_list() const;
  void validate() const;
};

// price_per_hour * runtime / 3600
double estimate_cost(const HardwareProfile& hw, double runtime_s);

// Strict preference used by every selection path: higher throughput, then
// lower cost, then lexicographically smaller method id, then hardware id.
bool preferred(const CandidateEvaluation& a, const CandidateEvaluation& b);

// Filter by estimated_cost <= budget, then argmax under `preferred`. Throws
// NoFeasibleMethod (carrying the minimum cost) when nothing survives.
SelectionDecision choose_best(std::span<const CandidateEvaluation> candidates, double budget);

// Predicts every (method, hardware) pair and fills cost and feasibility.
std::vector<CandidateEvaluation> evaluate_candidates(const TrainedPredictor& predictor, const TaskDescriptor& task,
                                                     std::span<const MethodDescriptor> methods,
                                                     std::span<const HardwareProfile> hardware, double budget);

// Fixed hardware: argmax over methods.
SelectionDecision select_online(const TrainedPredictor& predictor, const SelectionRequest& request);
// Catalog: argmax over the method x hardware product.
SelectionDecision select_joint(const TrainedPredictor& predictor, const SelectionRequest& request);
// Dispatches on the request's hardware alternative.
SelectionDecision select(const TrainedPredictor& predictor, const SelectionRequest& request);

}  // namespace accelsel
