#include "secrecy/random.hpp"

#include <cmath>
#include <numbers>

namespace secrecy {

namespace {

std::uint32_t low_word(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t high_word(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, Substream stream, std::uint64_t shard) {
    const auto id = static_cast<std::uint64_t>(stream);
    std::seed_seq seq{low_word(seed), high_word(seed), low_word(id), low_word(shard), high_word(shard)};
    engine_.seed(seq);
}

double RandomStream::exponential(double mean) {
    // 1 - u lies in (0, 1], so the log is finite.
    return -mean * std::log(1.0 - uniform());
}

double RandomStream::standard_normal() {
    // Box-Muller, one output per call; libstdc++'s normal_distribution caches
    // state across calls and is not specified bit-for-bit.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace secrecy
