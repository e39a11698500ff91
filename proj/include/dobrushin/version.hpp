#pragma once

namespace dobrushin {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace dobrushin
