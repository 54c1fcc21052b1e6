#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ssa_autogroup {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for the stream identified by `keys` under `seed`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(seed);
    for (const std::uint64_t k : keys) {
        h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    }
    return h;
}

[[nodiscard]] inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::seed_seq seq{static_cast<std::uint32_t>(derive_seed(seed, keys)),
                      static_cast<std::uint32_t>(derive_seed(seed, keys) >> 32)};
    return Rng(seq);
}

} // namespace ssa_autogroup
