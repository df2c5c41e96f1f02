#pragma once

namespace popdyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace popdyn
