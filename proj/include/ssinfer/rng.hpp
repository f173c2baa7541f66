#pragma once

#include <cstdint>
#include <random>

namespace ssinfer {

/// All stochastic operations in the toolkit consume an explicit engine or a
/// 64-bit seed. Derived streams are obtained by hashing (seed, stream ids)
/// with the splitmix64 finalizer, so independent sub-tasks (replicates,
/// particles batches, datasets) get decorrelated, reproducible streams.
using RngEngine = std::mt19937_64;

/// splitmix64 output function. Good avalanche, cheap, stateless.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed2701d3a12f1bULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2) {
    return derive_seed(derive_seed(seed, s1), s2);
}

inline RngEngine make_rng(std::uint64_t seed) { return RngEngine(splitmix64(seed)); }

inline RngEngine make_rng(std::uint64_t seed, std::uint64_t stream) {
    return RngEngine(derive_seed(seed, stream));
}

inline RngEngine make_rng(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2) {
    return RngEngine(derive_seed(seed, s1, s2));
}

}  // namespace ssinfer
