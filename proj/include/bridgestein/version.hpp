#pragma once

namespace bridgestein {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bridgestein
