#pragma once

// Deterministic RNG helpers. std::shuffle and the std distributions are
// implementation-defined, so anything that must reproduce across machines
// goes through these fixed mappings of mt19937_64 output.

#include <cstdint>
#include <random>
#include <vector>

namespace grasp {

inline constexpr const char* kRngAlgorithm = "mt19937_64/fisher-yates-modulo";

// splitmix64 finalizer: derives decorrelated stream seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + uniform_unit(rng) * (hi - lo);
}

// Uniform integer in [0, n). Modulo mapping; the small bias is irrelevant
// next to cross-platform reproducibility.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

template <typename T>
void fisher_yates(std::vector<T>& items, std::mt19937_64& rng) {
    for (size_t i = items.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace grasp
