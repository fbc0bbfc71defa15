#pragma once

namespace edgelab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kModules[] = {"freeprob", "combinatorics", "edge", "dunkl", "stochastics", "ensembles"};

}  // namespace edgelab
