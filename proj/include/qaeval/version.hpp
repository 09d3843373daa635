#pragma once

namespace qaeval {

inline constexpr const char* kToolkitVersion = "0.1.0";

} // namespace qaeval
