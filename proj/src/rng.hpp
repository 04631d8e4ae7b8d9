#pragma once

#include <cmath>
#include <cstdint>

namespace evin {

// Counter-based pseudo-random generator. Every draw is a pure function of
// (key, counter), so any sample in any stream can be produced independently
// of the others: disjoint blocks generate in parallel, and re-running a
// subset of trials reproduces them bit-exactly. Streams derived from the
// same key are decorrelated by a separate derivation constant, so e.g. the
// state chain and the I/Q emissions of a synthesis never share counters
// (changing the emission mode cannot perturb the state path).
//
// The word function is the SplitMix64 finalizer over key + counter * gamma,
// which passes standard statistical batteries in this counter arrangement.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    // Independent child stream; ids need not be small or contiguous.
    CounterRng stream(std::uint64_t id) const {
        return CounterRng(avalanche(key_ + kStreamGamma * (id + 1)));
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return avalanche(key_ + kSampleGamma * (counter + 1));
    }

    // Uniform on [0, 1): 53 mantissa bits, never returns 1.0.
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draw i consumes counters 2i and 2i+1.
    double gaussian(std::uint64_t index) const {
        const double u1 = uniform01(2 * index);      // 1-u1 in (0,1], log finite
        const double u2 = uniform01(2 * index + 1);
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        return radius * std::cos(2.0 * kPi * u2);
    }

    std::uint64_t key() const { return key_; }

private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    static constexpr std::uint64_t kSampleGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kStreamGamma = 0xd1b54a32d192ed03ULL;

    static std::uint64_t avalanche(std::uint64_t x) {
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t key_;
};

}  // namespace evin
