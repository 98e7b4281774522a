#include "odrc/rng.hpp"

namespace odrc {

namespace {

std::uint32_t low(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t high(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

} // namespace

Rng make_stream(std::uint64_t master, Stream stream, std::uint64_t index)
{
    std::seed_seq seq{low(master), high(master), static_cast<std::uint32_t>(stream),
                      low(index), high(index)};
    return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index)
{
    Rng rng = make_stream(master, stream, index);
    return rng();
}

Rng make_rng(std::uint64_t seed)
{
    std::seed_seq seq{low(seed), high(seed)};
    return Rng(seq);
}

} // namespace odrc
