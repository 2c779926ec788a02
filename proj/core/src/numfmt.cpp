#include "accelsel/numfmt.hpp"

#include <cstdio>
#include <cstdlib>

namespace accelsel {

// snprintf/strtod are only locale dependent through the decimal point, and the
// library never calls setlocale, so the "C" locale is in effect.

double quantize_sig9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

std::string format_sig9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_fixed4(double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::uint64_t stable_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace accelsel
