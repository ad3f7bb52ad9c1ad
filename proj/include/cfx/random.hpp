#pragma once

#include <cstdint>
#include <random>

#include "cfx/rational.hpp"

namespace cfx {

/// Independent random stream keyed by (seed, index). Streams for different
/// indices do not depend on the order in which they are consumed, so work
/// can be split across threads without changing results.
class TrialStream {
public:
    TrialStream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, 2^bits).
    BigInt uniform_bits(std::size_t bits);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

private:
    std::mt19937_64 engine_;
};

}  // namespace cfx
