#pragma once

namespace findex {

inline constexpr const char* kVersion = "0.1.0";

// Recorded in run manifests: outputs are only comparable across runs that used
// the same generator algorithm.
inline constexpr const char* kGeneratorId = "mt19937_64+polar-box-muller/v1";

}  // namespace findex
