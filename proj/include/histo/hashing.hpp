#ifndef HISTO_HASHING_HPP_
#define HISTO_HASHING_HPP_

#include <cstdint>
#include <random>

namespace histo {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// counter-based seed splitting: child i of a master seed
inline uint64_t derive_seed(uint64_t master, uint64_t idx) {
    return splitmix64(master ^ splitmix64(idx + 0x51ed2701a9b5e3f7ULL));
}

// keyed 64-bit mix, used by sketches and samplers
inline uint64_t hash64(uint64_t seed, uint64_t x) {
    return splitmix64(seed ^ (x * 0xff51afd7ed558ccdULL));
}

// map a 64-bit hash to [0, w) without modulo bias concerns
inline uint64_t reduce_range(uint64_t h, uint64_t w) {
    return (uint64_t)(((unsigned __int128)h * w) >> 64);
}

// uniform double in [0,1) from one engine step; the engine itself is
// byte-portable, std distributions are not
inline double uniform_double(std::mt19937_64& g) {
    return (double)(g() >> 11) * 0x1.0p-53;
}

// unbiased uniform integer in [0, n)
inline uint64_t uniform_below(std::mt19937_64& g, uint64_t n) {
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = g();
    } while (x >= lim);
    return x % n;
}

}  // namespace histo

#endif  // HISTO_HASHING_HPP_
