#include "cfx/random.hpp"

#include <vector>

namespace cfx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ index);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
}

BigInt TrialStream::uniform_bits(std::size_t bits) {
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buffer(words);
    for (auto& w : buffer) {
        w = next();
    }
    if (const std::size_t extra = words * 64 - bits; extra != 0 && words != 0) {
        buffer.back() >>= extra;
    }
    BigInt out;
    if (words != 0) {
        mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buffer.data());
    }
    return out;
}

double TrialStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace cfx
