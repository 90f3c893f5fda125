#pragma once

#include <cstdint>
#include <random>

namespace usertype {

/// splitmix64; used to derive independent seed streams from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for logical sub-stream `stream` of `seed` (tree index, fold index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

/// Uniform integer in [0, n). Plain modulo: the bias at n << 2^64 is
/// irrelevant here and the result does not depend on library internals,
/// unlike std::uniform_int_distribution.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

}  // namespace usertype
