#pragma once

namespace m3gen {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace m3gen
