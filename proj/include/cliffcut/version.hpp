#pragma once

namespace cliffcut {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cliffcut
