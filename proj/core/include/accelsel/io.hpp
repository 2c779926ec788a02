#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "accelsel/domain.hpp"
#include "accelsel/simlab.hpp"

namespace accelsel {

// History files are JSON Lines: a header object, then one object per task,
// then one per measurement in record-key order. Reals are stored with 9
// significant digits. See docs/history_format.md.
inline constexpr int kHistoryFormatVersion = 1;

struct HistoryHeader {
  int format_version = kHistoryFormatVersion;
  std::string config_digest;
};

struct HistoryFile {
  HistoryHeader header;
  std::vector<TaskDescriptor> tasks;
  PerformanceTensor tensor;
};

std::string history_to_text(const std::vector<TaskDescriptor>& tasks, const PerformanceTensor& tensor,
                            const std::string& config_digest = {});
// VersionError on an unknown format_version, ParseError (with line number) on
// anything malformed.
HistoryFile history_from_text(const std::string& text);

void write_history(const std::filesystem::path& path, const std::vector<TaskDescriptor>& tasks,
                   const PerformanceTensor& tensor, const std::string& config_digest = {});
HistoryFile read_history(const std::filesystem::path& path);

// The value a history holds after one write/read cycle: every real rounded to
// 9 significant digits.
History quantized(const History& history);

// Single-entity documents used by the CLI.
TaskDescriptor task_from_text(const std::string& text);
HardwareProfile hardware_from_text(const std::string& text);
std::vector<HardwareProfile> catalog_from_text(const std::string& text);
std::string decision_to_text(const SelectionDecision& decision);
std::string task_to_text(const TaskDescriptor& task);
std::string hardware_to_text(const HardwareProfile& hw);

std::string read_file(const std::filesystem::path& path);                          // IoError
void write_file(const std::filesystem::path& path, const std::string& contents);  // IoError

}  // namespace accelsel
