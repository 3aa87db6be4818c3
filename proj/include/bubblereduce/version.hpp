#pragma once

// Library identity. Single source of truth for the version reported by the
// CLI (`--version`) and embedded in JSON report meta blocks.

#define BUBBLEREDUCE_VERSION_MAJOR 1
#define BUBBLEREDUCE_VERSION_MINOR 0
#define BUBBLEREDUCE_VERSION_PATCH 0

namespace bubblereduce {

inline constexpr const char* version_string = "1.0.0";

}  // namespace bubblereduce
