#pragma once

namespace relcon {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

} // namespace relcon
