#pragma once

namespace mhs {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a change could alter any computed residue.
// Cache records from other engine versions are ignored.
inline constexpr const char* kEngineVersion = "1";

} // namespace mhs
