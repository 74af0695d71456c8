#include "dynperm/rng.hpp"

namespace dynperm {

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
}

Rng derive_rng_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng{derive_seed(master_seed, stream_id)};
}

// Lemire, "Fast random integer generation in an interval" (2019).
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    __uint128_t m = static_cast<__uint128_t>(rng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<__uint128_t>(rng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool fair_bit(Rng& rng) {
    return (rng() >> 63) != 0;
}

}  // namespace dynperm
