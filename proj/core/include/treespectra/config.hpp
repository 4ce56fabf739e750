#pragma once

#include <cstddef>

namespace treespectra {

// Recursion denominators smaller than this abort a boundary evaluation.
inline constexpr double kPoleThreshold = 1e-12;

// Residual tolerance for the exact Green-function identities.
inline constexpr double kIdentityTolerance = 1e-10;

// |Hf - gamma f| must stay below this before a boundary measure is built.
inline constexpr double kEigenGate = 1e-8;

inline constexpr int kDefaultDegreeBound = 16;

// Upper bound on the number of vertices any enumeration will materialise.
inline constexpr std::size_t kMaxEnumeration = std::size_t{1} << 22;

}  // namespace treespectra
