#pragma once

namespace rswz {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rswz
