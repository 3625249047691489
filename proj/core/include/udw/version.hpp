#pragma once

namespace udw {
inline constexpr const char* kVersion = "0.1.0";
}
