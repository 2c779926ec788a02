#include <fstream>
#include <sstream>

#include "accelsel/errors.hpp"
#include "accelsel/predictor.hpp"
#include "json_codec.hpp"

namespace accelsel {

namespace {

using codec::get_field;
using codec::json;

constexpr const char* kModelFormat = "accelsel-model";

json head_to_json(const RegressionHead& head) {
  if (const auto* g = std::get_if<GbdtModel>(&head)) {
    json trees = json::array();
    for (const auto& t : g->trees) {
      json nodes = json::array();
      for (const auto& n : t.nodes) nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
      trees.push_back(std::move(nodes));
    }
    return json{{"kind", "gbdt"}, {"base", g->base}, {"loss_curve", g->loss_curve}, {"trees", std::move(trees)}};
  }
  const auto& k = std::get<KnnModel>(head);
  return json{{"kind", "knn"},
              {"k", k.k},
              {"cols", k.inputs.cols()},
              {"inputs", k.inputs.data()},
              {"targets", k.targets},
              {"tie_rank", k.tie_rank}};
}

RegressionHead head_from_json(const json& j, std::size_t input_dim) {
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "gbdt") {
    GbdtModel g;
    g.base = get_field<double>(j, "base");
    g.loss_curve = get_field<std::vector<double>>(j, "loss_curve");
    const json& trees = j.at("trees");
    if (!trees.is_array()) throw ParseError("gbdt trees must be an array");
    for (const auto& jt : trees) {
      RegressionTree t;
      if (!jt.is_array() || jt.empty()) throw ParseError("tree must be a non-empty node array");
      for (const auto& jn : jt) {
        if (!jn.is_array() || jn.size() != 5) throw ParseError("tree node must have 5 entries");
        TreeNode n;
        n.feature = jn[0].get<int>();
        n.threshold = jn[1].get<double>();
        n.left = jn[2].get<int>();
        n.right = jn[3].get<int>();
        n.value = jn[4].get<double>();
        t.nodes.push_back(n);
      }
      const int count = static_cast<int>(t.nodes.size());
      for (int i = 0; i < count; ++i) {
        const auto& n = t.nodes[static_cast<std::size_t>(i)];
        if (n.is_leaf()) continue;
        if (n.feature >= static_cast<int>(input_dim) || n.left <= i || n.right <= i || n.left >= count ||
            n.right >= count) {
          throw ParseError("tree node " + std::to_string(i) + " is out of range");
        }
      }
      g.trees.push_back(std::move(t));
    }
    return g;
  }
  if (kind == "knn") {
    const auto k = get_field<std::size_t>(j, "k");
    const auto cols = get_field<std::size_t>(j, "cols");
    auto flat = get_field<std::vector<double>>(j, "inputs");
    auto targets = get_field<std::vector<double>>(j, "targets");
    auto rank = get_field<std::vector<std::uint32_t>>(j, "tie_rank");
    if (cols != input_dim || flat.size() != cols * targets.size()) throw ParseError("knn table has wrong shape");
    DenseMatrix inputs;
    for (std::size_t r = 0; r < targets.size(); ++r) {
      inputs.append_row(std::span<const double>(flat.data() + r * cols, cols));
    }
    try {
      return fit_knn(std::move(inputs), std::move(targets), std::move(rank), k);
    } catch (const Error& e) {
      throw ParseError(std::string("invalid knn table: ") + e.what());
    }
  }
  throw ParseError("unknown head kind '" + kind + "'");
}

}  // namespace

std::string model_to_text(const TrainedPredictor& p) {
  json doc{
      {"format", kModelFormat},
      {"format_version", kModelFormatVersion},
      {"config", codec::predictor_config_to_json(p.config)},
      {"embedding", codec::embedding_config_to_json(p.embedding)},
      {"schema_ids", {{"data", p.data_schema}, {"method", p.method_schema}, {"hardware", p.hardware_schema}}},
      {"normalizer",
       {{"schema_id", p.normalizer.schema_id}, {"mean", p.normalizer.mean}, {"stddev", p.normalizer.stddev}}},
      {"training",
       {{"rows", p.row_count},
        {"seed", p.config.seed},
        {"mean_log_throughput", p.mean_log_throughput},
        {"mean_log_runtime", p.mean_log_runtime}}},
      {"heads", {{"log_throughput", head_to_json(p.throughput_head)}, {"log_runtime", head_to_json(p.runtime_head)}}},
  };
  return doc.dump(1) + "\n";
}

TrainedPredictor model_from_text(const std::string& text) {
  const json doc = codec::parse_text(text);
  if (!doc.is_object() || doc.value("format", std::string()) != kModelFormat) {
    throw ParseError("not an accelsel model document");
  }
  const auto version = get_field<int>(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw VersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  }
  try {
    TrainedPredictor p;
    p.config = codec::predictor_config_from_json(doc.at("config"));
    p.config.validate();
    p.embedding = codec::embedding_config_from_json(doc.at("embedding"));
    const json& ids = doc.at("schema_ids");
    p.data_schema = get_field<std::string>(ids, "data");
    p.method_schema = get_field<std::string>(ids, "method");
    p.hardware_schema = get_field<std::string>(ids, "hardware");
    const json& norm = doc.at("normalizer");
    p.normalizer.schema_id = get_field<std::string>(norm, "schema_id");
    p.normalizer.mean = get_field<std::vector<double>>(norm, "mean");
    p.normalizer.stddev = get_field<std::vector<double>>(norm, "stddev");
    if (p.normalizer.mean.size() != p.normalizer.stddev.size()) throw ParseError("normalizer size mismatch");
    const json& tr = doc.at("training");
    p.row_count = get_field<std::size_t>(tr, "rows");
    p.mean_log_throughput = get_field<double>(tr, "mean_log_throughput");
    p.mean_log_runtime = get_field<double>(tr, "mean_log_runtime");
    const json& heads = doc.at("heads");
    p.throughput_head = head_from_json(heads.at("log_throughput"), p.normalizer.mean.size());
    p.runtime_head = head_from_json(heads.at("log_runtime"), p.normalizer.mean.size());
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed model config: ") + e.what());
  }
}

void save_model(const TrainedPredictor& predictor, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << model_to_text(predictor);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

TrainedPredictor load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_text(buf.str());
}

}  // namespace accelsel
