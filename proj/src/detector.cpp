#include "detector.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "error.hpp"

namespace evin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2 = std::numbers::ln2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lse2(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a == kNegInf) return kNegInf;
    return a + std::log1p(std::exp(b - a));
}

double lse(const std::vector<double>& v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - m);
    return m + std::log(acc);
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void check_finite(const std::vector<double>& received) {
    for (std::size_t i = 0; i < received.size(); ++i)
        if (!std::isfinite(received[i]))
            fail(Status::invalid_argument,
                 "received sample " + std::to_string(i) + " is not finite");
}

}  // namespace

std::vector<double> awgn_llrs(const std::vector<double>& received, double noise_var) {
    if (!(noise_var > 0.0)) fail(Status::invalid_argument, "noise variance must be positive");
    check_finite(received);
    std::vector<double> llrs(received.size());
    const double scale = 2.0 / noise_var;
    for (std::size_t i = 0; i < received.size(); ++i) llrs[i] = scale * received[i];
    return llrs;
}

std::vector<double> bcjr_llrs(const std::vector<double>& received, const ModelProfile& profile,
                              const std::vector<double>* symbol_priors) {
    profile.validate();
    check_finite(received);
    if (symbol_priors) {
        if (symbol_priors->size() != received.size())
            fail(Status::invalid_argument, "symbol prior length does not match input length");
        check_finite(*symbol_priors);
    }
    const std::size_t n = received.size();
    const std::size_t M = profile.states();

    // A single state carries no memory: the recursion reduces to the
    // memoryless Gaussian LLR, so return that form and keep the identity
    // exact in floating point.
    if (M == 1) {
        std::vector<double> llrs =
            awgn_llrs(received, profile.sigma[0] * profile.sigma[0]);
        if (symbol_priors)
            for (std::size_t k = 0; k < n; ++k) llrs[k] += (*symbol_priors)[k];
        return llrs;
    }
    if (n == 0) return {};

    std::vector<double> log_norm(M), neg_half_inv_var(M), log_pi(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double var = profile.sigma[m] * profile.sigma[m];
        log_norm[m] = -0.5 * std::log(kTwoPi * var);
        neg_half_inv_var[m] = -0.5 / var;
        log_pi[m] = profile.p[m] > 0.0 ? std::log(profile.p[m]) : kNegInf;
    }
    // log P_ij for P_ij = r [i=j] + (1-r) p_j.
    std::vector<double> log_trans(M * M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            const double pij = (i == j ? profile.r : 0.0) + (1.0 - profile.r) * profile.p[j];
            log_trans[i * M + j] = pij > 0.0 ? std::log(pij) : kNegInf;
        }

    auto log_prior_plus = [&](std::size_t k) {
        return symbol_priors ? -softplus(-(*symbol_priors)[k]) : -kLog2;
    };
    auto log_prior_minus = [&](std::size_t k) {
        return symbol_priors ? -softplus((*symbol_priors)[k]) : -kLog2;
    };
    auto emit_plus = [&](std::size_t k, std::size_t m) {
        const double d = received[k] - 1.0;
        return log_norm[m] + neg_half_inv_var[m] * d * d;
    };
    auto emit_minus = [&](std::size_t k, std::size_t m) {
        const double d = received[k] + 1.0;
        return log_norm[m] + neg_half_inv_var[m] * d * d;
    };
    // Symbol-marginalized emission density of state m at step k.
    auto log_gamma = [&](std::size_t k, std::size_t m) {
        return lse2(log_prior_plus(k) + emit_plus(k, m), log_prior_minus(k) + emit_minus(k, m));
    };

    // Backward pass, stored; beta_n = const so the chain end is unconstrained,
    // matching exact marginalization over all state paths.
    std::vector<double> log_beta(n * M, 0.0);
    std::vector<double> scratch(M);
    for (std::size_t k = n - 1; k > 0; --k) {
        double step_max = kNegInf;
        for (std::size_t m = 0; m < M; ++m) {
            for (std::size_t j = 0; j < M; ++j)
                scratch[j] = log_trans[m * M + j] + log_gamma(k, j) + log_beta[k * M + j];
            const double v = lse(scratch);
            log_beta[(k - 1) * M + m] = v;
            step_max = std::max(step_max, v);
        }
        if (step_max == kNegInf)
            fail(Status::numeric_error, "backward recursion underflowed to zero probability");
        for (std::size_t m = 0; m < M; ++m) log_beta[(k - 1) * M + m] -= step_max;
    }

    // Forward pass emits LLRs on the fly. log_alpha is the predictive state
    // distribution p(s_k | y_{1..k-1}) up to normalization.
    std::vector<double> llrs(n);
    std::vector<double> log_alpha(log_pi);
    std::vector<double> num_plus(M), num_minus(M), log_post(M);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < M; ++m) {
            const double base = log_alpha[m] + log_beta[k * M + m];
            num_plus[m] = base + log_prior_plus(k) + emit_plus(k, m);
            num_minus[m] = base + log_prior_minus(k) + emit_minus(k, m);
        }
        llrs[k] = lse(num_plus) - lse(num_minus);
        if (!std::isfinite(llrs[k]))
            fail(Status::numeric_error,
                 "LLR at position " + std::to_string(k) + " is not finite");
        if (k + 1 == n) break;
        double step_max = kNegInf;
        for (std::size_t m = 0; m < M; ++m) {
            log_post[m] = log_alpha[m] + log_gamma(k, m);
            step_max = std::max(step_max, log_post[m]);
        }
        if (step_max == kNegInf)
            fail(Status::numeric_error, "forward recursion underflowed to zero probability");
        for (std::size_t m = 0; m < M; ++m) log_post[m] -= step_max;
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t m = 0; m < M; ++m)
                scratch[m] = log_post[m] + log_trans[m * M + j];
            log_alpha[j] = lse(scratch);
        }
    }
    return llrs;
}

}  // namespace evin
