#pragma once

#include <cstdint>
#include <random>

namespace fjs {

/// One generator per run. Draws go through the standard distributions, so
/// streams are reproducible within a build, not across standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi], both inclusive.
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Uniform real in [0, 1).
inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace fjs
