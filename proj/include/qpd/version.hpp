#pragma once

namespace qpd {

inline constexpr const char* kToolName = "qpd";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace qpd
