#pragma once

namespace simplexkern {
inline constexpr const char* kVersion = "0.1.0";
}
