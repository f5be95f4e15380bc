#pragma once

#include <cstdint>

namespace hyperstab {

/// Counter-based generator: the k-th draw of stream s under seed x is
/// splitmix64(x ^ mix(s) + k * golden). Streams are independent, so any
/// sub-task can be given its own stream without coordinating with others.
/// Named "splitmix64-ctr" in certificates.
class CounterRng {
public:
    static constexpr const char* name = "splitmix64-ctr";

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(seed ^ finalize(stream + 0x632be59bd9b4e019ULL)) {}

    CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream + 1); }

    std::uint64_t next() { return finalize(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform in [0, bound) by rejection, bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform in (0, 1].
    double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }

private:
    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace hyperstab
