#pragma once

namespace hodgeloop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hodgeloop
