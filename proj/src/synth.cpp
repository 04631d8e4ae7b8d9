#include "synth.hpp"

#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace evin {

namespace {

// Inverse-CDF draw from p given a uniform in [0, 1).
int pick_state(const std::vector<double>& p, double u) {
    double cum = 0.0;
    const int M = static_cast<int>(p.size());
    for (int m = 0; m < M; ++m) {
        cum += p[m];
        if (u < cum) return m;
    }
    return M - 1;  // guards rounding at the top of the CDF
}

std::vector<std::uint8_t> state_path(const ModelProfile& profile, std::size_t n,
                                     const CounterRng& state_rng) {
    std::vector<std::uint8_t> states(n);
    int current = pick_state(profile.p, state_rng.uniform01(0));
    states[0] = static_cast<std::uint8_t>(current);
    const double r = profile.r;
    for (std::size_t i = 1; i < n; ++i) {
        const double u = state_rng.uniform01(i);
        if (u >= r) {
            // Renewal branch: the conditional law of (u-r)/(1-r) is uniform,
            // so one draw per step decides both staying and the new state.
            current = pick_state(profile.p, (u - r) / (1.0 - r));
        }
        states[i] = static_cast<std::uint8_t>(current);
    }
    return states;
}

NoiseRealization synthesize_with_rng(const ModelProfile& profile, std::size_t n,
                                     std::uint64_t seed, SynthMode mode,
                                     const CounterRng& root) {
    profile.validate();
    if (n < 1) fail(Status::invalid_argument, "sample count must be at least 1");
    NoiseRealization out;
    out.profile = profile;
    out.seed = seed;
    out.mode = mode;
    out.states = state_path(profile, n, root.stream(kStreamState));
    out.samples.resize(n);
    const CounterRng emit_i = root.stream(kStreamEmitI);
    const CounterRng emit_q = root.stream(kStreamEmitQ);
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = profile.sigma[out.states[i]];
        const double re = sigma * emit_i.gaussian(i);
        const double im = mode == SynthMode::complex_iq ? sigma * emit_q.gaussian(i) : 0.0;
        out.samples[i] = {re, im};
    }
    return out;
}

}  // namespace

IQRecording NoiseRealization::to_recording(double sample_rate_hz) const {
    IQRecording rec;
    rec.sample_rate_hz = sample_rate_hz;
    rec.origin = "synthesized";
    rec.samples.reserve(samples.size());
    for (const auto& z : samples)
        rec.samples.emplace_back(static_cast<float>(z.real()), static_cast<float>(z.imag()));
    return rec;
}

std::vector<std::uint8_t> sample_state_sequence(const ModelProfile& profile, std::size_t n,
                                                std::uint64_t seed) {
    profile.validate();
    if (n < 1) fail(Status::invalid_argument, "sample count must be at least 1");
    return state_path(profile, n, CounterRng(seed).stream(kStreamState));
}

NoiseRealization synthesize_noise(const ModelProfile& profile, std::size_t n,
                                  std::uint64_t seed, SynthMode mode) {
    return synthesize_with_rng(profile, n, seed, mode, CounterRng(seed));
}

NoiseRealization synthesize_noise_block(const ModelProfile& profile, std::size_t n,
                                        std::uint64_t seed, std::uint64_t block,
                                        SynthMode mode) {
    return synthesize_with_rng(profile, n, seed, mode,
                               CounterRng(seed).stream(kStreamBlocks).stream(block));
}

}  // namespace evin
