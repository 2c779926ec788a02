#include "accelsel/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "accelsel/errors.hpp"
#include "accelsel/numfmt.hpp"
#include "accelsel/rng.hpp"
#include "json_codec.hpp"

namespace accelsel {

namespace {

using codec::json;

// Salts for the derived seed streams.
enum SeedStream : std::uint64_t { kTrainTasks = 1, kNoise = 2, kHeldoutTasks = 3, kRandomPolicy = 4 };

void check_keys(const json& j, const char* section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(std::string("unknown key '") + key + "' in " + section);
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  try {
    return codec::get_field_or(j, key, fallback);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
}

json range_to_json(const Range& r) { return json::array({r.lo, r.hi}); }

Range range_from_json(const json& j, const char* key, Range fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("workload.") + key + " must be a [lo, hi] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

json workload_to_json(const WorkloadSpec& w) {
  return json{{"n_tasks", w.n_tasks},
              {"batch_size", range_to_json(w.batch_size)},
              {"prefix_hit_ratio", range_to_json(w.prefix_hit_ratio)},
              {"prompt_len", range_to_json(w.prompt_len)},
              {"output_len", range_to_json(w.output_len)},
              {"num_requests", range_to_json(w.num_requests)},
              {"request_rate", range_to_json(w.request_rate)}};
}

WorkloadSpec workload_from_json(const json& j) {
  check_keys(j, "workload",
             {"n_tasks", "batch_size", "prefix_hit_ratio", "prompt_len", "output_len", "num_requests", "request_rate"});
  WorkloadSpec w;
  w.n_tasks = field_or(j, "n_tasks", w.n_tasks);
  w.batch_size = range_from_json(j, "batch_size", w.batch_size);
  w.prefix_hit_ratio = range_from_json(j, "prefix_hit_ratio", w.prefix_hit_ratio);
  w.prompt_len = range_from_json(j, "prompt_len", w.prompt_len);
  w.output_len = range_from_json(j, "output_len", w.output_len);
  w.num_requests = range_from_json(j, "num_requests", w.num_requests);
  w.request_rate = range_from_json(j, "request_rate", w.request_rate);
  return w;
}

json ground_truth_to_json(const GroundTruthParams& p) {
  json scaling = json::object();
  for (const auto& [count, factor] : p.gpu_scaling) scaling[std::to_string(count)] = factor;
  return json{{"base_tps", p.base_tps},
              {"gpu_scaling", std::move(scaling)},
              {"cpu_factor", p.cpu_factor},
              {"cb_max_gain", p.cb_max_gain},
              {"cb_rate", p.cb_rate},
              {"pc_max_gain", p.pc_max_gain},
              {"chunk_gain", p.chunk_gain},
              {"interference_scale", p.interference_scale}};
}

GroundTruthParams ground_truth_from_json(const json& j) {
  check_keys(j, "ground_truth",
             {"base_tps", "gpu_scaling", "cpu_factor", "cb_max_gain", "cb_rate", "pc_max_gain", "chunk_gain",
              "interference_scale"});
  GroundTruthParams p;
  p.base_tps = field_or(j, "base_tps", p.base_tps);
  if (j.contains("gpu_scaling")) {
    const json& s = j.at("gpu_scaling");
    if (!s.is_object()) throw ConfigError("ground_truth.gpu_scaling must map GPU counts to factors");
    p.gpu_scaling.clear();
    for (const auto& [key, value] : s.items()) {
      std::size_t used = 0;
      std::int64_t count = 0;
      try {
        count = std::stoll(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != key.size() || !value.is_number()) {
        throw ConfigError("ground_truth.gpu_scaling entry '" + key + "' is invalid");
      }
      p.gpu_scaling[count] = value.get<double>();
    }
  }
  p.cpu_factor = field_or(j, "cpu_factor", p.cpu_factor);
  p.cb_max_gain = field_or(j, "cb_max_gain", p.cb_max_gain);
  p.cb_rate = field_or(j, "cb_rate", p.cb_rate);
  p.pc_max_gain = field_or(j, "pc_max_gain", p.pc_max_gain);
  p.chunk_gain = field_or(j, "chunk_gain", p.chunk_gain);
  p.interference_scale = field_or(j, "interference_scale", p.interference_scale);
  return p;
}

}  // namespace

std::string_view to_string(SelectionMode mode) { return mode == SelectionMode::joint ? "joint" : "fixed"; }

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::oracle: return "oracle";
    case PolicyKind::meta: return "meta";
    case PolicyKind::random: return "random";
    case PolicyKind::fixed: return "fixed";
  }
  throw InternalError("unknown PolicyKind");
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (PolicyKind k : {PolicyKind::oracle, PolicyKind::meta, PolicyKind::random, PolicyKind::fixed}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

void HarnessConfig::validate() const {
  train_workload().validate();
  if (heldout_tasks < 1) throw ConfigError("heldout_tasks must be >= 1");
  if (fleet.empty()) throw ConfigError("fleet must list at least one hardware profile");
  std::set<std::string> ids;
  for (const auto& hw : fleet) {
    try {
      hw.validate();
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
    if (!ids.insert(hw.hw_id).second) throw ConfigError("duplicate hw_id '" + hw.hw_id + "' in fleet");
  }
  ground_truth.validate();
  noise().validate();
  predictor.validate();
  if (embedding.text_dimension < 1) throw ConfigError("embedding.text_dimension must be >= 1");
  if (!(selection.budget > 0.0) || !std::isfinite(selection.budget)) {
    throw ConfigError("selection.budget must be finite and > 0");
  }
  if (selection.mode == SelectionMode::fixed && !ids.contains(selection.hw_id)) {
    throw ConfigError("selection.hw_id '" + selection.hw_id + "' is not in the fleet");
  }
  if (policies.empty()) throw ConfigError("policies must be non-empty");
  std::set<PolicyKind> seen;
  for (PolicyKind p : policies) {
    if (!seen.insert(p).second) throw ConfigError("policy '" + std::string(to_string(p)) + "' listed twice");
  }
}

WorkloadSpec HarnessConfig::train_workload() const {
  WorkloadSpec w = workload;
  w.seed = mix_seed(seed, kTrainTasks);
  w.id_prefix = "t";
  return w;
}

WorkloadSpec HarnessConfig::heldout_workload() const {
  WorkloadSpec w = workload;
  w.n_tasks = heldout_tasks;
  w.seed = mix_seed(seed, kHeldoutTasks);
  w.id_prefix = "h";
  return w;
}

NoiseSpec HarnessConfig::noise() const { return NoiseSpec{noise_sigma, mix_seed(seed, kNoise)}; }

std::uint64_t HarnessConfig::random_policy_seed() const { return mix_seed(seed, kRandomPolicy); }

std::vector<HardwareProfile> HarnessConfig::selection_hardware() const {
  if (selection.mode == SelectionMode::joint) return fleet;
  for (const auto& hw : fleet) {
    if (hw.hw_id == selection.hw_id) return {hw};
  }
  throw ConfigError("selection.hw_id '" + selection.hw_id + "' is not in the fleet");
}

std::string config_to_text(const HarnessConfig& c) {
  json fleet = json::array();
  for (const auto& hw : c.fleet) fleet.push_back(codec::hardware_to_json(hw));
  json policies = json::array();
  for (PolicyKind p : c.policies) policies.push_back(std::string(to_string(p)));
  json doc{
      {"seed", c.seed},
      {"workload", workload_to_json(c.workload)},
      {"heldout_tasks", c.heldout_tasks},
      {"evaluate_on_training_tasks", c.evaluate_on_training_tasks},
      {"fleet", std::move(fleet)},
      {"ground_truth", ground_truth_to_json(c.ground_truth)},
      {"noise", {{"sigma", c.noise_sigma}}},
      {"predictor", codec::predictor_config_to_json(c.predictor)},
      {"embedding", codec::embedding_config_to_json(c.embedding)},
      {"selection",
       {{"mode", std::string(to_string(c.selection.mode))},
        {"hw_id", c.selection.hw_id},
        {"budget", c.selection.budget}}},
      {"policies", std::move(policies)},
      {"fixed_method", std::string(to_string(c.fixed_method))},
  };
  return doc.dump(2) + "\n";
}

HarnessConfig config_from_text(const std::string& text) {
  const json doc = codec::parse_text(text);
  check_keys(doc, "config",
             {"seed", "workload", "heldout_tasks", "evaluate_on_training_tasks", "fleet", "ground_truth", "noise",
              "predictor", "embedding", "selection", "policies", "fixed_method"});
  HarnessConfig c;
  try {
    c.seed = field_or(doc, "seed", c.seed);
    if (doc.contains("workload")) c.workload = workload_from_json(doc.at("workload"));
    c.heldout_tasks = field_or(doc, "heldout_tasks", c.heldout_tasks);
    c.evaluate_on_training_tasks = field_or(doc, "evaluate_on_training_tasks", c.evaluate_on_training_tasks);
    if (doc.contains("fleet")) {
      const json& f = doc.at("fleet");
      if (!f.is_array()) throw ConfigError("fleet must be an array");
      c.fleet.clear();
      for (const auto& hw : f) c.fleet.push_back(codec::hardware_from_json(hw));
    }
    if (doc.contains("ground_truth")) c.ground_truth = ground_truth_from_json(doc.at("ground_truth"));
    if (doc.contains("noise")) {
      check_keys(doc.at("noise"), "noise", {"sigma"});
      c.noise_sigma = field_or(doc.at("noise"), "sigma", c.noise_sigma);
    }
    if (doc.contains("predictor")) {
      check_keys(doc.at("predictor"), "predictor", {"model_kind", "gbdt", "knn", "seed"});
      c.predictor = codec::predictor_config_from_json(doc.at("predictor"), c.predictor);
    }
    if (doc.contains("embedding")) {
      check_keys(doc.at("embedding"), "embedding", {"text", "text_dimension"});
      c.embedding = codec::embedding_config_from_json(doc.at("embedding"), c.embedding);
    }
    if (doc.contains("selection")) {
      const json& s = doc.at("selection");
      check_keys(s, "selection", {"mode", "hw_id", "budget"});
      const auto mode = field_or(s, "mode", std::string(to_string(c.selection.mode)));
      if (mode == "joint") {
        c.selection.mode = SelectionMode::joint;
      } else if (mode == "fixed") {
        c.selection.mode = SelectionMode::fixed;
      } else {
        throw ConfigError("selection.mode must be 'joint' or 'fixed'");
      }
      c.selection.hw_id = field_or(s, "hw_id", c.selection.hw_id);
      c.selection.budget = field_or(s, "budget", c.selection.budget);
    }
    if (doc.contains("policies")) {
      c.policies.clear();
      for (const auto& name : doc.at("policies")) c.policies.push_back(parse_policy_kind(name.get<std::string>()));
    }
    if (doc.contains("fixed_method")) c.fixed_method = parse_method_id(doc.at("fixed_method").get<std::string>());
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_text(buf.str());
}

std::string config_digest(const HarnessConfig& config) { return hex64(stable_hash(config_to_text(config))); }

}  // namespace accelsel
