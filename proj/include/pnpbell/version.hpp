#pragma once

namespace pnpbell {
inline constexpr const char* kVersion = "1.0.0";
}
