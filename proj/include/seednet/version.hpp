#pragma once

namespace seednet {

inline constexpr const char* kVersion = "0.1.0";

} // namespace seednet
