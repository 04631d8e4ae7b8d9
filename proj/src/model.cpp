#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace evin {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kProbSumTol = 1e-9;

void validate_prob_vector(const std::vector<double>& p) {
    if (p.empty()) fail(Status::invalid_argument, "probability vector is empty");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(Status::invalid_argument, "probability vector has negative or non-finite entries");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kProbSumTol)
        fail(Status::invalid_argument, "probability vector does not sum to 1");
}

}  // namespace

void MiddletonParams::validate() const {
    if (!(A > 0.0) || !std::isfinite(A))
        fail(Status::invalid_argument, "impulsive index A must be positive");
    if (!(Gamma > 0.0) || !std::isfinite(Gamma))
        fail(Status::invalid_argument, "background-to-impulse ratio Gamma must be positive");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        fail(Status::invalid_argument, "total power sigma2 must be positive");
    if (M < 1) fail(Status::invalid_argument, "state count M must be at least 1");
}

double ModelProfile::mixture_power() const {
    double power = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) power += p[m] * sigma[m] * sigma[m];
    return power;
}

void ModelProfile::validate() const {
    validate_prob_vector(p);
    if (sigma.size() != p.size())
        fail(Status::invalid_argument, "state probability and sigma vectors differ in length");
    for (double s : sigma) {
        if (!(s > 0.0) || !std::isfinite(s))
            fail(Status::invalid_argument, "state sigmas must be positive");
    }
    for (std::size_t m = 1; m < sigma.size(); ++m) {
        if (sigma[0] > sigma[m])
            fail(Status::invalid_argument, "state 0 must carry the smallest sigma (background)");
    }
    if (!(r >= 0.0 && r <= 1.0))
        fail(Status::invalid_argument, "correlation r must lie in [0, 1]");
}

ModelProfile make_profile(std::vector<double> p, std::vector<double> sigma, double r) {
    if (p.size() != sigma.size())
        fail(Status::invalid_argument, "state probability and sigma vectors differ in length");
    // Reorder states ascending by sigma so index 0 is the background state.
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] < sigma[b]; });
    ModelProfile profile;
    profile.p.reserve(p.size());
    profile.sigma.reserve(sigma.size());
    for (std::size_t idx : order) {
        profile.p.push_back(p[idx]);
        profile.sigma.push_back(sigma[idx]);
    }
    profile.r = r;
    profile.validate();
    return profile;
}

std::vector<double> middleton_state_probs(double A, int M) {
    if (!(A > 0.0) || !std::isfinite(A))
        fail(Status::invalid_argument, "impulsive index A must be positive");
    if (M < 1) fail(Status::invalid_argument, "state count M must be at least 1");
    // Poisson weights A^m/m! accumulated in log space for large A or M.
    std::vector<double> log_terms(M);
    double log_term = 0.0;  // log(A^0/0!)
    for (int m = 0; m < M; ++m) {
        log_terms[m] = log_term;
        log_term += std::log(A) - std::log(static_cast<double>(m + 1));
    }
    const double log_max = *std::max_element(log_terms.begin(), log_terms.end());
    std::vector<double> probs(M);
    double sum = 0.0;
    for (int m = 0; m < M; ++m) {
        probs[m] = std::exp(log_terms[m] - log_max);
        sum += probs[m];
    }
    for (double& v : probs) v /= sum;
    return probs;
}

std::vector<double> middleton_state_vars(const MiddletonParams& params) {
    params.validate();
    std::vector<double> vars(params.M);
    for (int m = 0; m < params.M; ++m)
        vars[m] = params.sigma2 * (m / params.A + params.Gamma) / (1.0 + params.Gamma);
    return vars;
}

ModelProfile profile_from_middleton(const MiddletonParams& params, double r) {
    const std::vector<double> probs = middleton_state_probs(params.A, params.M);
    const std::vector<double> vars = middleton_state_vars(params);
    std::vector<double> sigmas(vars.size());
    std::transform(vars.begin(), vars.end(), sigmas.begin(),
                   [](double v) { return std::sqrt(v); });
    return make_profile(probs, sigmas, r);
}

std::vector<double> transition_matrix(double r, const std::vector<double>& p) {
    if (!(r >= 0.0 && r <= 1.0))
        fail(Status::invalid_argument, "correlation r must lie in [0, 1]");
    validate_prob_vector(p);
    const int M = static_cast<int>(p.size());
    std::vector<double> P(static_cast<std::size_t>(M) * M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            P[static_cast<std::size_t>(i) * M + j] = (i == j ? r : 0.0) + (1.0 - r) * p[j];
    return P;
}

std::vector<double> mean_state_durations(double r, const std::vector<double>& p) {
    if (!(r >= 0.0 && r < 1.0))
        fail(Status::invalid_argument, "correlation r must lie in [0, 1) for finite durations");
    validate_prob_vector(p);
    std::vector<double> durations(p.size());
    for (std::size_t m = 0; m < p.size(); ++m) {
        if (p[m] >= 1.0)
            fail(Status::invalid_argument, "state probability 1 gives an infinite duration");
        durations[m] = 1.0 / ((1.0 - r) * (1.0 - p[m]));
    }
    return durations;
}

double correlation_from_duration(double d0, double p0) {
    if (!(d0 > 0.0) || !std::isfinite(d0))
        fail(Status::invalid_argument, "mean duration d0 must be positive");
    if (!(p0 >= 0.0 && p0 < 1.0))
        fail(Status::invalid_argument, "background probability p0 must lie in [0, 1)");
    double r = 1.0 - 1.0 / (d0 * (1.0 - p0));
    // Rounding in the division can push an exactly-memoryless pair (where
    // d0 (1 - p0) == 1) a few ulps below zero; that is not an inconsistency.
    if (r < 0.0 && r > -1e-12) r = 0.0;
    if (!(r >= 0.0 && r < 1.0))
        fail(Status::inconsistent_measurement,
             "measured (d0, p0) give correlation " + std::to_string(r) +
                 " outside [0, 1)");
    return r;
}

double noise_pdf(double z, const ModelProfile& profile) {
    profile.validate();
    double density = 0.0;
    for (std::size_t m = 0; m < profile.p.size(); ++m) {
        const double s = profile.sigma[m];
        density += profile.p[m] * std::exp(-0.5 * z * z / (s * s)) / (s * std::sqrt(2.0 * kPi));
    }
    return density;
}

std::vector<double> stationary_distribution(const std::vector<double>& P, int M) {
    if (M < 1 || P.size() != static_cast<std::size_t>(M) * M)
        fail(Status::invalid_argument, "transition matrix size does not match state count");
    for (int i = 0; i < M; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < M; ++j) {
            const double v = P[static_cast<std::size_t>(i) * M + j];
            if (!(v >= 0.0 && v <= 1.0 + 1e-12))
                fail(Status::invalid_argument, "transition matrix entries must lie in [0, 1]");
            row_sum += v;
        }
        if (std::fabs(row_sum - 1.0) > kProbSumTol)
            fail(Status::invalid_argument, "transition matrix rows must sum to 1");
    }

    // Irreducibility: every state reachable from every state through
    // positive-probability transitions (transitive closure).
    std::vector<char> reach(static_cast<std::size_t>(M) * M, 0);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            reach[static_cast<std::size_t>(i) * M + j] =
                (i == j || P[static_cast<std::size_t>(i) * M + j] > 0.0) ? 1 : 0;
    for (int k = 0; k < M; ++k)
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                if (reach[static_cast<std::size_t>(i) * M + k] &&
                    reach[static_cast<std::size_t>(k) * M + j])
                    reach[static_cast<std::size_t>(i) * M + j] = 1;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            if (!reach[static_cast<std::size_t>(i) * M + j])
                fail(Status::invalid_argument,
                     "transition matrix is not irreducible; stationary distribution not unique");

    std::vector<double> pi(M, 1.0 / M);
    std::vector<double> next(M);
    constexpr int kMaxIters = 2'000'000;
    constexpr double kResidualTol = 1e-14;
    for (int iter = 0; iter < kMaxIters; ++iter) {
        double residual = 0.0;
        for (int j = 0; j < M; ++j) {
            double acc = 0.0;
            for (int i = 0; i < M; ++i) acc += pi[i] * P[static_cast<std::size_t>(i) * M + j];
            next[j] = acc;
        }
        double sum = 0.0;
        for (int j = 0; j < M; ++j) sum += next[j];
        for (int j = 0; j < M; ++j) next[j] /= sum;
        for (int j = 0; j < M; ++j) residual = std::max(residual, std::fabs(next[j] - pi[j]));
        pi.swap(next);
        if (residual < kResidualTol) return pi;
    }
    fail(Status::numeric_error, "stationary distribution power iteration did not converge");
}

}  // namespace evin
