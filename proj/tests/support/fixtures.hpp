#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "accelsel/domain.hpp"
#include "accelsel/rng.hpp"

namespace accelsel::testing {

inline TaskDescriptor make_task(std::string id, std::int64_t batch = 32, double r = 0.5, std::int64_t prompt = 128,
                                std::int64_t output = 10, std::int64_t requests = 1000, double rate = 10.0) {
  return TaskDescriptor{std::move(id), batch, r, prompt, output, requests, rate};
}

inline HardwareProfile make_gpu(std::string id, std::int64_t gpus, double price) {
  return HardwareProfile{std::move(id), gpus, 24.0 * static_cast<double>(gpus), 121.0 * static_cast<double>(gpus),
                         300.0 * static_cast<double>(gpus), price};
}

inline MetricVector metrics(double tps, double latency = 1.0, double runtime = 1.0) {
  return MetricVector{tps, latency, runtime};
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("accelsel-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace accelsel::testing
