#include "accelsel/selector.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "accelsel/errors.hpp"

namespace accelsel {

std::vector<HardwareProfile> SelectionRequest::hardware_list() const {
  if (const auto* one = std::get_if<HardwareProfile>(&hardware)) return {*one};
  return std::get<std::vector<HardwareProfile>>(hardware);
}

void SelectionRequest::validate() const {
  task.validate();
  if (methods.empty()) throw ValidationError("selection request has no methods");
  // A zero budget is a legal request that no candidate can satisfy.
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw ValidationError("budget must be finite and >= 0");
  const auto hws = hardware_list();
  if (hws.empty()) throw ValidationError("hardware catalog is empty");
  std::set<std::string> seen;
  for (const auto& hw : hws) {
    hw.validate();
    if (!seen.insert(hw.hw_id).second) throw ValidationError("duplicate hw_id '" + hw.hw_id + "' in catalog");
  }
}

double estimate_cost(const HardwareProfile& hw, double runtime_s) { return hw.price_per_hour * runtime_s / 3600.0; }

bool preferred(const CandidateEvaluation& a, const CandidateEvaluation& b) {
  if (a.predicted_throughput_tps != b.predicted_throughput_tps) {
    return a.predicted_throughput_tps > b.predicted_throughput_tps;
  }
  if (a.estimated_cost != b.estimated_cost) return a.estimated_cost < b.estimated_cost;
  if (a.method_id != b.method_id) return to_string(a.method_id) < to_string(b.method_id);
  return a.hw_id < b.hw_id;
}

SelectionDecision choose_best(std::span<const CandidateEvaluation> candidates, double budget) {
  if (candidates.empty()) throw ValidationError("no candidates to choose from");
  const CandidateEvaluation* best = nullptr;
  std::size_t feasible = 0;
  double min_cost = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    min_cost = std::min(min_cost, c.estimated_cost);
    if (!(c.estimated_cost <= budget)) continue;
    ++feasible;
    if (best == nullptr || preferred(c, *best)) best = &c;
  }
  if (best == nullptr) throw NoFeasibleMethod(min_cost, budget);
  return SelectionDecision{best->method_id,          best->hw_id,    best->predicted_throughput_tps,
                           best->predicted_runtime_s, best->estimated_cost, budget,
                           feasible};
}

std::vector<CandidateEvaluation> evaluate_candidates(const TrainedPredictor& predictor, const TaskDescriptor& task,
                                                     std::span<const MethodDescriptor> methods,
                                                     std::span<const HardwareProfile> hardware, double budget) {
  const Embedder embedder = predictor.embedder();
  const FeatureVector data = embedder.data(task);
  std::vector<FeatureVector> method_emb;
  for (const auto& m : methods) method_emb.push_back(embedder.method(m));

  std::vector<CandidateEvaluation> out;
  out.reserve(methods.size() * hardware.size());
  for (const auto& hw : hardware) {
    const FeatureVector hw_emb = embedder.hardware(hw);
    for (std::size_t j = 0; j < methods.size(); ++j) {
      const Prediction p = predictor.predict(data, method_emb[j], hw_emb);
      CandidateEvaluation c;
      c.method_id = methods[j].method_id;
      c.hw_id = hw.hw_id;
      c.predicted_throughput_tps = p.throughput_tps;
      c.predicted_runtime_s = p.runtime_s;
      c.estimated_cost = estimate_cost(hw, p.runtime_s);
      c.feasible = c.estimated_cost <= budget;
      out.push_back(std::move(c));
    }
  }
  return out;
}

SelectionDecision select_online(const TrainedPredictor& predictor, const SelectionRequest& request) {
  if (request.joint()) throw ValidationError("select_online needs a single hardware profile");
  request.validate();
  const auto hws = request.hardware_list();
  const auto candidates = evaluate_candidates(predictor, request.task, request.methods, hws, request.budget);
  return choose_best(candidates, request.budget);
}

SelectionDecision select_joint(const TrainedPredictor& predictor, const SelectionRequest& request) {
  request.validate();
  const auto hws = request.hardware_list();
  const auto candidates = evaluate_candidates(predictor, request.task, request.methods, hws, request.budget);
  return choose_best(candidates, request.budget);
}

SelectionDecision select(const TrainedPredictor& predictor, const SelectionRequest& request) {
  return request.joint() ? select_joint(predictor, request) : select_online(predictor, request);
}

}  // namespace accelsel
