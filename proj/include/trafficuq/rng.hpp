#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tuq {

/// splitmix64 step, used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-stage seed from a root seed and a stage label.
/// All pipeline randomness flows from one root seed through this.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
    std::uint64_t h = root;
    for (char c : label) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return splitmix64(h);
}

/// Derive a seed for the i-th member of a stage substream.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index) {
    return splitmix64(derive_seed(root, label) ^ splitmix64(index));
}

using Rng = std::mt19937_64;

}  // namespace tuq
