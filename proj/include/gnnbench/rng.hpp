#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gnnbench {

/// All randomness in the library flows through explicitly seeded generators.
using Rng = std::mt19937_64;

/// splitmix64 finalizer; good avalanche on cheap hashes.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-stream child seed.
///
/// A trial is identified by trial_seed = base_seed + trial_index. Each random
/// stream of the trial ("split", "sketch", "init") gets an independent seed:
/// FNV-1a over the 8 bytes of trial_seed followed by the stream name, then a
/// splitmix64 finalizer. The rule is part of the output contract: anyone
/// reimplementing it reproduces the same streams seed-for-seed.
inline std::uint64_t stream_seed(std::uint64_t trial_seed, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 8; ++i) {
        h ^= (trial_seed >> (8 * i)) & 0xffULL;
        h *= 0x100000001b3ULL;
    }
    for (unsigned char c : stream) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h);
}

} // namespace gnnbench
