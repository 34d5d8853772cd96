#pragma once

namespace involutions {
inline constexpr const char* version = "0.1.0";
}
