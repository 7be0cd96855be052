#pragma once

namespace spinwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinwalk
