#pragma once

namespace graphsmooth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace graphsmooth
