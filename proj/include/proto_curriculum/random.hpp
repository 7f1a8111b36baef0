#ifndef PROTO_CURRICULUM_RANDOM_HPP
#define PROTO_CURRICULUM_RANDOM_HPP

#include <cstdint>

namespace proto_curriculum {

// Counter-based random streams built on the SplitMix64 finalizer.
//
// Every value is a pure function of (key, counter), so any draw can be
// regenerated independently of the order in which draws are produced.
// Host-language bindings reproduce streams by porting these few lines.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// i-th output of the SplitMix64 sequence seeded with `key`.
constexpr std::uint64_t at(std::uint64_t key, std::uint64_t i) {
    return mix64(key + (i + 1) * kGolden);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Maps 64 random bits onto [0, n) by a 128-bit multiply (bias below n / 2^64).
inline std::uint64_t to_range(std::uint64_t bits, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
}

// Seed for epoch `epoch` of a run keyed by `master_seed`.
constexpr std::uint64_t epoch_seed(std::uint64_t master_seed, std::uint64_t epoch) {
    return mix64(master_seed ^ mix64(epoch + kGolden));
}

}  // namespace rng
}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_RANDOM_HPP
