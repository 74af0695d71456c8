#ifndef DYNPERM_RNG_HPP
#define DYNPERM_RNG_HPP

#include <cstdint>
#include <random>

namespace dynperm {

// All simulation code draws from this engine. Its output sequence is fixed by
// the C++ standard, so seeded runs reproduce across platforms. The standard
// distributions are not (their algorithms are implementation-defined), which
// is why the helpers below are used instead.
using Rng = std::mt19937_64;

// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for stream `stream_id` of an experiment with `master_seed`:
// splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019)).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

// Independent, reproducible generator for one trial.
Rng derive_rng_stream(std::uint64_t master_seed, std::uint64_t stream_id);

// Unbiased integer in [0, bound). bound must be > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

// Double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

bool fair_bit(Rng& rng);

}  // namespace dynperm

#endif  // DYNPERM_RNG_HPP
