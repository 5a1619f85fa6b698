#pragma once

#include <cstdint>
#include <random>

namespace ogrl {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent seed for a numbered sub-stream of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng)
{
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

} // namespace ogrl
