#pragma once

namespace nusl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nusl
