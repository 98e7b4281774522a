#pragma once

#include <cstdint>
#include <random>

namespace odrc {

using Rng = std::mt19937_64;

/// Named random streams derived from one master seed. Each network
/// component draws from its own stream so that changing one ablation
/// (e.g. the noise level) leaves every other draw untouched.
enum class Stream : std::uint32_t {
    reservoir_weights = 1,
    initial_state = 2,
    noise = 3,
    oscillators = 4,
};

/// Deterministic generator for `(master, stream, index)`.
Rng make_stream(std::uint64_t master, Stream stream, std::uint64_t index = 0);

/// First 64-bit draw of the `(master, stream, index)` stream; used to hand a
/// plain seed to constructors that take one.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

/// Generator seeded directly from a single integer (used by the
/// free-standing constructors that take a plain seed).
Rng make_rng(std::uint64_t seed);

} // namespace odrc
