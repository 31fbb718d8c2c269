#pragma once

namespace tocsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tocsim
