#pragma once

#include <cstdint>
#include <random>

namespace uipq {

// mt19937_64 output is fixed by the standard, and every derived draw below
// uses only integer arithmetic or exact scaling, so streams are portable.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64() {
        ++counter_;
        return engine_();
    }
    // uniform on [0,1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // uniform on {0, ..., n-1}, n >= 1, unbiased by rejection
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    // stream for shard i; seeds are mixed so nearby (seed, i) pairs do not collide
    RngStream substream(std::uint64_t i) const { return RngStream(splitmix64(seed_ ^ splitmix64(i + 1))); }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::mt19937_64 engine_;
};

inline std::uint64_t RngStream::below(std::uint64_t n) {
    if (n <= 1)
        return 0;
    std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

} // namespace uipq
