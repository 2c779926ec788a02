#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace accelsel::cli {

// Exit statuses of the accelsel command line.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kIoError = 2,
  kNoFeasible = 3,
  kInternal = 4,
};

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace accelsel::cli
