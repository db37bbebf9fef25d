#pragma once

#include <cstdint>
#include <initializer_list>

namespace pdsc {

// SplitMix64 finalizer; used to derive independent stream seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts) {
    std::uint64_t s = mix_seed(base);
    for (auto salt : salts) s = mix_seed(s ^ mix_seed(salt + 0x632BE59BD9B4E019ull));
    return s;
}

}  // namespace pdsc
