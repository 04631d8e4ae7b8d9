#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "model.hpp"
#include "recording.hpp"

namespace evin {

enum class SynthMode { real, complex_iq };

// One seeded realization of the Markov chain and its Gaussian emissions.
// In real mode the imaginary parts are zero; the state path for a given
// (profile, n, seed) is identical in both modes.
struct NoiseRealization {
    std::vector<std::uint8_t> states;
    std::vector<std::complex<double>> samples;
    ModelProfile profile;
    std::uint64_t seed = 0;
    SynthMode mode = SynthMode::complex_iq;

    IQRecording to_recording(double sample_rate_hz) const;
};

// Hidden-state path: initial state from the stationary distribution (= p),
// transitions per P_ij = r*[i==j] + (1-r) p_j. One uniform draw per step.
std::vector<std::uint8_t> sample_state_sequence(const ModelProfile& profile, std::size_t n,
                                                std::uint64_t seed);

// Per-state Gaussian emissions on top of the state path. Deterministic:
// identical (profile, n, seed, mode) gives bit-identical output.
NoiseRealization synthesize_noise(const ModelProfile& profile, std::size_t n,
                                  std::uint64_t seed, SynthMode mode);

// Stream ids under the root seed key; block synthesis derives one child per
// block so independently seeded blocks never share counters. State
// continuity is NOT preserved across blocks (each block restarts the chain
// from the stationary distribution); single-stream synthesize_noise
// preserves it.
enum RngStream : std::uint64_t {
    kStreamState = 0,
    kStreamEmitI = 1,
    kStreamEmitQ = 2,
    kStreamBlocks = 3,
};

NoiseRealization synthesize_noise_block(const ModelProfile& profile, std::size_t n,
                                        std::uint64_t seed, std::uint64_t block,
                                        SynthMode mode);

}  // namespace evin
