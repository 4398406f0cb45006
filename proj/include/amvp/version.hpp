#pragma once

namespace amvp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace amvp
