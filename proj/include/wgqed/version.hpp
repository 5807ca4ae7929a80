#pragma once

#define WGQED_VERSION "0.1.0"

namespace wgqed {
inline constexpr const char* version = WGQED_VERSION;
}
