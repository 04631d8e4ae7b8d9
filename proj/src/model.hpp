#pragma once

#include <vector>

namespace evin {

// Canonical Class A parameterization: impulsive index A, background-to-impulse
// ratio Gamma, total power sigma2, and the number of mixture states M
// (state 0 is the Gaussian background).
struct MiddletonParams {
    double A = 0.0;
    double Gamma = 0.0;
    double sigma2 = 0.0;
    int M = 0;

    void validate() const;
};

// The working parameter set of the (modified) Markov-Middleton model:
// per-state probabilities p, per-state PER-COMPONENT standard deviations
// sigma (state 0 = background = smallest sigma), and the correlation r.
// sigma applies to the I or Q component individually; complex synthesis
// draws both components independently with the same sigma.
struct ModelProfile {
    std::vector<double> p;
    std::vector<double> sigma;
    double r = 0.0;

    int states() const { return static_cast<int>(p.size()); }

    // Per-component mixture power sum p_m * sigma_m^2.
    double mixture_power() const;

    void validate() const;
};

// Normalizing constructor: checks invariants and reorders states ascending
// by sigma so that index 0 is always the background state.
ModelProfile make_profile(std::vector<double> p, std::vector<double> sigma, double r);

// p_m = (e^-A A^m / m!) / sum_k (e^-A A^k / k!), m = 0..M-1.
std::vector<double> middleton_state_probs(double A, int M);

// sigma^2_m = sigma2 * (m/A + Gamma) / (1 + Gamma), m = 0..M-1.
std::vector<double> middleton_state_vars(const MiddletonParams& params);

// Both of the above combined into a ModelProfile with the given correlation.
ModelProfile profile_from_middleton(const MiddletonParams& params, double r);

// Row-stochastic M x M matrix, row-major: P_ij = r*[i==j] + (1-r) p_j.
std::vector<double> transition_matrix(double r, const std::vector<double>& p);

// d_m = 1 / ((1-r)(1-p_m)); mean state run length in samples.
std::vector<double> mean_state_durations(double r, const std::vector<double>& p);

// r = 1 - 1/(d0 (1-p0)); errors if the result falls outside [0, 1).
double correlation_from_duration(double d0, double p0);

// Gaussian mixture density sum_m p_m N(z; 0, sigma_m^2) of one component.
double noise_pdf(double z, const ModelProfile& profile);

// Stationary distribution of a row-stochastic matrix (power iteration).
// Rejects matrices that are not irreducible.
std::vector<double> stationary_distribution(const std::vector<double>& P, int M);

}  // namespace evin
