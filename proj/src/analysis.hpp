#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "model.hpp"
#include "recording.hpp"

namespace evin {

// Impulse decision mask: flags[i] = (|z_i| > alpha * W_rms). In windowed
// mode the recording is cut into consecutive windows of window_len samples
// (final partial window included) and each window gets its own threshold
// from its own W_rms; window_len 0 means one threshold from the whole
// segment.
struct ImpulseMask {
    std::vector<std::uint8_t> flags;
    double alpha = 0.0;
    std::size_t window_len = 0;            // 0 = full-segment threshold
    std::vector<double> thresholds;        // one entry per window (or one total)
    std::vector<double> w_rms;             // W_rms per window (or one total)

    double threshold() const { return thresholds.front(); }
    std::size_t flagged_count() const;
};

// Burst event over a half-open sample span [start, end); mean_power is the
// average |z|^2 over the span (bridged gaps included). cluster is 0 until
// assigned, then 1..M-1 ascending by cluster power.
struct BurstEvent {
    std::size_t start = 0;
    std::size_t end = 0;
    double mean_power = 0.0;
    int cluster = 0;
};

struct Histogram {
    double lo = 0.0;   // lower edge of first bin
    double hi = 0.0;   // upper edge of last bin
    std::vector<std::uint64_t> counts;
};

// Per-component moments of the retained (background) samples, plus
// plot-ready histograms.
struct BackgroundStats {
    std::size_t count = 0;          // samples retained per component
    double mean_i = 0.0, mean_q = 0.0;
    double var_i = 0.0, var_q = 0.0;
    double kurtosis_i = 0.0, kurtosis_q = 0.0;  // excess kurtosis
    Histogram hist_i, hist_q;
};

struct AnalysisConfig {
    double alpha = 3.0;
    double min_duration_s = 0.5e-3;
    double gap_tolerance_s = 0.3e-6;
    int clusters = 3;                // k = M - 1
    int max_kmeans_iters = 100;
    std::size_t window_len = 0;      // 0 = full-segment threshold
    int histogram_bins = 101;

    void validate() const;
};

// Everything the estimation pipeline produces: the recovered profile, the
// per-state mean durations d_m (index 0 = background gaps), burst
// bookkeeping, background diagnostics over the off-burst samples, and the
// effective configuration echoed for reproducibility.
struct EstimationReport {
    ModelProfile profile;
    std::vector<double> durations;
    std::size_t burst_count = 0;
    std::vector<BurstEvent> bursts;
    BackgroundStats background;
    AnalysisConfig config;
    double threshold = 0.0;
    double w_rms_value = 0.0;
    std::size_t n_samples = 0;
    double sample_rate_hz = 0.0;
};

// Root-mean-square of the complex magnitude over the full recording.
double rms(const IQRecording& recording);

// Seconds -> samples, rounding any fractional tail up; a small relative
// epsilon guards against 0.0005 * 2.6e6 = 1300.0000000000002 adding a
// spurious sample.
std::size_t duration_to_samples(double seconds, double sample_rate_hz);

ImpulseMask impulse_mask(const IQRecording& recording, double alpha,
                         std::size_t window_len = 0);

std::vector<BurstEvent> detect_bursts(const ImpulseMask& mask, const IQRecording& recording,
                                      double min_duration_s, double gap_tolerance_s);

// Moments over the unflagged samples (at least 100 required).
BackgroundStats background_stats(const IQRecording& recording, const ImpulseMask& mask,
                                 int histogram_bins = 101);

// Lloyd's algorithm on scalars. Deterministic: centroids initialized at the
// (2j+1)/(2k) quantiles of the distinct values, assignment ties break toward
// the lower-index centroid, output centroids ascending with labels
// renumbered to match.
std::pair<std::vector<double>, std::vector<int>> kmeans_1d(const std::vector<double>& values,
                                                           int k, int max_iters = 100);

EstimationReport estimate_profile(const IQRecording& recording, const AnalysisConfig& config);

// Serialization of reports/profiles to the flat key-value text format and
// of burst/histogram tables to CSV (all writes atomic).
void save_profile(const ModelProfile& profile, const std::string& path);
ModelProfile load_profile(const std::string& path);
void save_report(const EstimationReport& report, const std::string& path);
EstimationReport load_report(const std::string& path);
// Checks internal consistency of a report's profile and durations:
// probability/σ invariants plus the duration relation r = 1 - 1/(d0(1-p0))
// within r_tolerance.
void validate_report(const EstimationReport& report, double r_tolerance);
std::string bursts_to_csv(const std::vector<BurstEvent>& bursts, double sample_rate_hz);
std::string histogram_to_csv(const BackgroundStats& stats);

}  // namespace evin
