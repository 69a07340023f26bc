#pragma once

#include <cstdint>

namespace disc {

// Counter-based generator: mixing (seed, counter) through splitmix64 gives
// the same stream whether samples are drawn serially or in parallel.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t counter_hash(uint64_t seed, uint64_t counter) {
    return splitmix64(splitmix64(seed) ^ splitmix64(counter ^ 0xd1b54a32d192ed03ULL));
}

// Uniform in (0, 1).
inline double uniform01(uint64_t seed, uint64_t counter) {
    return (static_cast<double>(counter_hash(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace disc
