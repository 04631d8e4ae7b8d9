#pragma once

#include <vector>

#include "model.hpp"

namespace evin {

// LLRs log[P(x=+1|y)/P(x=-1|y)] for unit-energy BPSK under a single-Gaussian
// noise assumption: LLR_k = 2 y_k / noise_var. Positive favors +1 (bit 0).
std::vector<double> awgn_llrs(const std::vector<double>& received, double noise_var);

// Per-symbol MAP LLRs marginalizing over the hidden noise-state chain with a
// log-domain forward-backward recursion, normalized each step. The chain
// starts from its stationary distribution. `symbol_priors`, when non-null,
// supplies per-symbol prior LLRs in the same sign convention (default: all
// zero, i.e. equiprobable symbols) and must match `received` in length.
std::vector<double> bcjr_llrs(const std::vector<double>& received, const ModelProfile& profile,
                              const std::vector<double>* symbol_priors = nullptr);

}  // namespace evin
