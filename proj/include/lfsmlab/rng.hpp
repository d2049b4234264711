#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lfsmlab {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Hash a base seed together with a list of stream coordinates, e.g.
/// (base_seed, alpha_index, hurst_index, trial). Order matters.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) noexcept;

/// 64-bit engine for one (seed, stream) pair. Streams with different ids are
/// statistically independent for practical purposes.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id = 0);

/// Uniform variate strictly inside (0, 1) built from the top 53 bits.
inline double open_unit(std::mt19937_64& eng) noexcept {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace lfsmlab
