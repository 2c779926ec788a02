#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace accelsel {

// Round to 9 significant decimal digits. Persisted histories store values in
// this form so that files are byte-identical across platforms.
double quantize_sig9(double value);

// "%.9g" rendering, locale independent.
std::string format_sig9(double value);

// "%.4f" rendering used by the description templates.
std::string format_fixed4(double value);

// 64-bit FNV-1a. Stable across runs and platforms.
std::uint64_t stable_hash(std::string_view bytes);

std::string hex64(std::uint64_t value);

}  // namespace accelsel
