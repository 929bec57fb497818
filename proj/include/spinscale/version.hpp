#pragma once

namespace spinscale {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinscale
