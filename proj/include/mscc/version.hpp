#pragma once

namespace mscc {

inline constexpr const char* kToolName = "mscc";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace mscc
