#pragma once

#include <cstdint>
#include <random>

namespace secrecy {

// Independent purposes drawn from one master seed. Keeping them apart means
// swapping the classifier never perturbs the generated traffic.
enum class Substream : std::uint64_t {
    scheduling = 1,
    power = 2,
    symbols = 3,
    tie_break = 4,
    noise = 5,
    profile = 6,
};

/// Seeded 64-bit random stream. The (seed, substream, shard) triple fully
/// determines the sequence, which is what makes sharded simulation results
/// independent of the worker count.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, Substream stream, std::uint64_t shard = 0);

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    int sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

    bool coin() { return (engine_() >> 63) != 0; }

    double exponential(double mean);

    double standard_normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace secrecy
