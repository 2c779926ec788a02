#include <fstream>
#include <set>
#include <sstream>

#include "accelsel/errors.hpp"
#include "accelsel/io.hpp"
#include "accelsel/numfmt.hpp"
#include "json_codec.hpp"

namespace accelsel {

namespace {

using codec::json;

constexpr const char* kHistoryFormat = "accelsel-history";

TaskDescriptor quantized_task(TaskDescriptor t) {
  t.prefix_hit_ratio = quantize_sig9(t.prefix_hit_ratio);
  t.request_rate = quantize_sig9(t.request_rate);
  return t;
}

MetricVector quantized_metrics(const MetricVector& m) {
  return {quantize_sig9(m.throughput_tps), quantize_sig9(m.latency_s), quantize_sig9(m.runtime_s)};
}

}  // namespace

std::string history_to_text(const std::vector<TaskDescriptor>& tasks, const PerformanceTensor& tensor,
                            const std::string& config_digest) {
  std::string out;
  const json header{{"kind", "header"},
                    {"format", kHistoryFormat},
                    {"format_version", kHistoryFormatVersion},
                    {"schema_ids", {{"task", "task-v1"}, {"measurement", "measurement-v1"}}},
                    {"config_digest", config_digest}};
  out += header.dump() + "\n";
  for (const auto& t : tasks) {
    json j = codec::task_to_json(quantized_task(t));
    j["kind"] = "task";
    out += j.dump() + "\n";
  }
  for (const auto& [key, metrics] : tensor.records()) {
    json j = codec::metrics_to_json(quantized_metrics(metrics));
    j["kind"] = "measurement";
    j["task_id"] = key.task_id;
    j["method_id"] = std::string(to_string(key.method_id));
    j["hw_id"] = key.hw_id;
    out += j.dump() + "\n";
  }
  return out;
}

HistoryFile history_from_text(const std::string& text) {
  HistoryFile file;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> task_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
      const auto kind = codec::get_field<std::string>(j, "kind");
      if (!have_header) {
        if (kind != "header" || j.value("format", std::string()) != kHistoryFormat) {
          throw ParseError("first record must be an accelsel-history header", line_no);
        }
        file.header.format_version = codec::get_field<int>(j, "format_version");
        if (file.header.format_version != kHistoryFormatVersion) {
          throw VersionError("history format version " + std::to_string(file.header.format_version) +
                             " is not supported (expected " + std::to_string(kHistoryFormatVersion) + ")");
        }
        file.header.config_digest = codec::get_field_or<std::string>(j, "config_digest", "");
        have_header = true;
      } else if (kind == "task") {
        TaskDescriptor t = codec::task_from_json(j);
        if (!task_ids.insert(t.task_id).second) throw ParseError("duplicate task '" + t.task_id + "'", line_no);
        file.tasks.push_back(std::move(t));
      } else if (kind == "measurement") {
        RecordKey key{codec::get_field<std::string>(j, "task_id"),
                      parse_method_id(codec::get_field<std::string>(j, "method_id")),
                      codec::get_field<std::string>(j, "hw_id")};
        if (!task_ids.contains(key.task_id)) {
          throw ParseError("measurement refers to unknown task '" + key.task_id + "'", line_no);
        }
        MetricVector m{codec::get_field<double>(j, "throughput_tps"), codec::get_field<double>(j, "latency_s"),
                       codec::get_field<double>(j, "runtime_s")};
        file.tensor.insert(key, m);
      } else {
        throw ParseError("unknown record kind '" + kind + "'", line_no);
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no);
    } catch (const VersionError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("history is empty (no header)");
  return file;
}

void write_history(const std::filesystem::path& path, const std::vector<TaskDescriptor>& tasks,
                   const PerformanceTensor& tensor, const std::string& config_digest) {
  write_file(path, history_to_text(tasks, tensor, config_digest));
}

HistoryFile read_history(const std::filesystem::path& path) { return history_from_text(read_file(path)); }

History quantized(const History& history) {
  History out;
  for (const auto& t : history.tasks) out.tasks.push_back(quantized_task(t));
  for (const auto& [key, m] : history.tensor.records()) out.tensor.insert(key, quantized_metrics(m));
  return out;
}

TaskDescriptor task_from_text(const std::string& text) {
  try {
    return codec::task_from_json(codec::parse_text(text));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid task: ") + e.what());
  }
}

HardwareProfile hardware_from_text(const std::string& text) {
  try {
    return codec::hardware_from_json(codec::parse_text(text));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid hardware profile: ") + e.what());
  }
}

std::vector<HardwareProfile> catalog_from_text(const std::string& text) {
  const json doc = codec::parse_text(text);
  if (!doc.is_array() || doc.empty()) throw ParseError("catalog must be a non-empty array of hardware profiles");
  std::vector<HardwareProfile> out;
  try {
    for (const auto& j : doc) out.push_back(codec::hardware_from_json(j));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid hardware profile: ") + e.what());
  }
  return out;
}

std::string decision_to_text(const SelectionDecision& decision) {
  return codec::decision_to_json(decision).dump(2) + "\n";
}

std::string task_to_text(const TaskDescriptor& task) { return codec::task_to_json(task).dump(2) + "\n"; }

std::string hardware_to_text(const HardwareProfile& hw) { return codec::hardware_to_json(hw).dump(2) + "\n"; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace accelsel
