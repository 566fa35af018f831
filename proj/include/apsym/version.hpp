#pragma once

namespace apsym {

inline constexpr const char* kToolName = "apsym";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace apsym
