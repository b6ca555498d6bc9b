#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace efpred {

using Rng = std::mt19937_64;

// Independent substream seed for (seed, index), e.g. one stream per tree.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Named substream ("balance", "folds", "forest", ...).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

// 64-bit FNV-1a; stable across platforms, used for config hashes.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace efpred
