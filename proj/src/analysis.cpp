#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "error.hpp"
#include "textio.hpp"

namespace evin {

namespace {

double span_rms(const IQRecording& rec, std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double re = rec.samples[i].real();
        const double im = rec.samples[i].imag();
        acc += re * re + im * im;
    }
    return std::sqrt(acc / static_cast<double>(end - begin));
}

double sample_power(const IQRecording& rec, std::size_t i) {
    const double re = rec.samples[i].real();
    const double im = rec.samples[i].imag();
    return re * re + im * im;
}

// Moments and histograms over the samples whose exclude flag is false.
BackgroundStats stats_excluding(const IQRecording& rec, const std::vector<std::uint8_t>& exclude,
                                int histogram_bins) {
    if (histogram_bins < 1)
        fail(Status::invalid_argument, "histogram bin count must be at least 1");
    const std::size_t n = rec.size();
    BackgroundStats stats;
    double sum_i = 0.0, sum_q = 0.0;
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (exclude[idx]) continue;
        ++stats.count;
        sum_i += rec.samples[idx].real();
        sum_q += rec.samples[idx].imag();
    }
    if (stats.count < 100)
        fail(Status::insufficient_data,
             "only " + std::to_string(stats.count) +
                 " background samples retained; need at least 100");
    const double inv = 1.0 / static_cast<double>(stats.count);
    stats.mean_i = sum_i * inv;
    stats.mean_q = sum_q * inv;

    double m2_i = 0.0, m4_i = 0.0, m2_q = 0.0, m4_q = 0.0;
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (exclude[idx]) continue;
        const double di = rec.samples[idx].real() - stats.mean_i;
        const double dq = rec.samples[idx].imag() - stats.mean_q;
        const double di2 = di * di;
        const double dq2 = dq * dq;
        m2_i += di2;
        m4_i += di2 * di2;
        m2_q += dq2;
        m4_q += dq2 * dq2;
    }
    m2_i *= inv;
    m4_i *= inv;
    m2_q *= inv;
    m4_q *= inv;
    stats.var_i = m2_i;
    stats.var_q = m2_q;
    stats.kurtosis_i = m2_i > 0.0 ? m4_i / (m2_i * m2_i) - 3.0 : 0.0;
    stats.kurtosis_q = m2_q > 0.0 ? m4_q / (m2_q * m2_q) - 3.0 : 0.0;

    // Shared symmetric range so the I and Q histograms tabulate together.
    // The epsilon floor keeps the bin width positive for degenerate
    // (constant) inputs; clamping then parks every sample in an edge bin.
    const double spread =
        std::max(6.0 * std::sqrt(std::max(stats.var_i, stats.var_q)), 1e-12);
    const double lo = -spread, hi = spread;
    const double width = (hi - lo) / histogram_bins;
    stats.hist_i.lo = stats.hist_q.lo = lo;
    stats.hist_i.hi = stats.hist_q.hi = hi;
    stats.hist_i.counts.assign(histogram_bins, 0);
    stats.hist_q.counts.assign(histogram_bins, 0);
    auto bin_of = [&](double x) {
        const auto raw = static_cast<long long>(std::floor((x - lo) / width));
        return static_cast<std::size_t>(std::clamp<long long>(raw, 0, histogram_bins - 1));
    };
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (exclude[idx]) continue;
        ++stats.hist_i.counts[bin_of(rec.samples[idx].real())];
        ++stats.hist_q.counts[bin_of(rec.samples[idx].imag())];
    }
    return stats;
}

// Keys shared by profile and report files; loaders ignore the ones they do
// not need but reject unknown keys outright.
bool known_key(const std::string& key) {
    static const char* kKnown[] = {
        "M", "p", "sigma", "r", "d",
        "n_samples", "sample_rate_hz", "alpha", "window_len", "min_duration_s",
        "gap_tolerance_s", "clusters", "max_kmeans_iters", "histogram_bins",
        "w_rms", "threshold", "burst_count",
        "bg_count", "bg_mean_i", "bg_mean_q", "bg_var_i", "bg_var_q",
        "bg_kurtosis_i", "bg_kurtosis_q",
    };
    for (const char* k : kKnown)
        if (key == k) return true;
    return false;
}

void reject_unknown_keys(const std::vector<KeyValue>& kvs, const std::string& path) {
    for (const KeyValue& kv : kvs)
        if (!known_key(kv.key))
            fail(Status::format_error,
                 path + ":" + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
}

ModelProfile profile_from_kvs(const std::vector<KeyValue>& kvs, const std::string& path) {
    ModelProfile profile;
    profile.p = parse_double_vector(require_key(kvs, "p", path), path);
    profile.sigma = parse_double_vector(require_key(kvs, "sigma", path), path);
    profile.r = parse_double(require_key(kvs, "r", path), path);
    if (const KeyValue* m = find_key(kvs, "M")) {
        if (parse_int(*m, path) != static_cast<long long>(profile.p.size()))
            fail(Status::format_error, path + ": key 'M' disagrees with the length of 'p'");
    }
    profile.validate();
    return profile;
}

std::string profile_body(const ModelProfile& profile) {
    std::string out;
    out += "M = " + std::to_string(profile.states()) + "\n";
    out += "p = " + format_double_vector(profile.p) + "\n";
    out += "sigma = " + format_double_vector(profile.sigma) + "\n";
    out += "r = " + format_double(profile.r) + "\n";
    return out;
}

}  // namespace

std::size_t ImpulseMask::flagged_count() const {
    std::size_t count = 0;
    for (std::uint8_t f : flags) count += f;
    return count;
}

void AnalysisConfig::validate() const {
    if (!(alpha > 0.0)) fail(Status::invalid_argument, "alpha must be positive");
    if (!(min_duration_s >= 0.0) || !(gap_tolerance_s >= 0.0))
        fail(Status::invalid_argument, "durations must be nonnegative");
    if (clusters < 1) fail(Status::invalid_argument, "cluster count must be at least 1");
    if (max_kmeans_iters < 1) fail(Status::invalid_argument, "max k-means iterations must be at least 1");
    if (histogram_bins < 1) fail(Status::invalid_argument, "histogram bin count must be at least 1");
}

double rms(const IQRecording& recording) {
    recording.validate();
    return span_rms(recording, 0, recording.size());
}

std::size_t duration_to_samples(double seconds, double sample_rate_hz) {
    if (!(seconds >= 0.0)) fail(Status::invalid_argument, "duration must be nonnegative");
    if (!(sample_rate_hz > 0.0)) fail(Status::invalid_argument, "sample rate must be positive");
    const double raw = seconds * sample_rate_hz;
    const double guarded = raw - 1e-9 * std::max(1.0, raw);
    return guarded <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(guarded));
}

ImpulseMask impulse_mask(const IQRecording& recording, double alpha, std::size_t window_len) {
    recording.validate();
    if (!(alpha > 0.0)) fail(Status::invalid_argument, "alpha must be positive");
    const std::size_t n = recording.size();
    ImpulseMask mask;
    mask.alpha = alpha;
    mask.window_len = window_len >= n ? 0 : window_len;
    mask.flags.assign(n, 0);
    const auto windows = mask.window_len == 0
                             ? std::vector<Window>{{0, n, false}}
                             : window_iter(n, mask.window_len, mask.window_len);
    for (const Window& w : windows) {
        const double w_rms = span_rms(recording, w.offset, w.offset + w.length);
        const double th = alpha * w_rms;
        mask.w_rms.push_back(w_rms);
        mask.thresholds.push_back(th);
        const double th2 = th * th;
        for (std::size_t i = w.offset; i < w.offset + w.length; ++i)
            mask.flags[i] = sample_power(recording, i) > th2 ? 1 : 0;  // strict >
    }
    return mask;
}

std::vector<BurstEvent> detect_bursts(const ImpulseMask& mask, const IQRecording& recording,
                                      double min_duration_s, double gap_tolerance_s) {
    recording.validate();
    if (mask.flags.size() != recording.size())
        fail(Status::invalid_argument, "mask length does not match recording length");
    const std::size_t n = recording.size();
    const std::size_t gap_samples = duration_to_samples(gap_tolerance_s, recording.sample_rate_hz);
    const std::size_t min_samples = duration_to_samples(min_duration_s, recording.sample_rate_hz);

    std::vector<BurstEvent> events;
    std::size_t i = 0;
    while (i < n) {
        if (!mask.flags[i]) {
            ++i;
            continue;
        }
        std::size_t run_start = i;
        std::size_t run_end = i + 1;
        while (run_end < n && mask.flags[run_end]) ++run_end;
        // Bridge across unflagged gaps no longer than the tolerance.
        std::size_t cursor = run_end;
        while (cursor < n) {
            std::size_t gap_end = cursor;
            while (gap_end < n && !mask.flags[gap_end]) ++gap_end;
            if (gap_end >= n || gap_end - cursor > gap_samples) break;
            cursor = gap_end + 1;
            while (cursor < n && mask.flags[cursor]) ++cursor;
            run_end = cursor;
        }
        if (run_end - run_start >= min_samples && run_end > run_start) {
            BurstEvent ev;
            ev.start = run_start;
            ev.end = run_end;
            double acc = 0.0;
            for (std::size_t s = run_start; s < run_end; ++s) acc += sample_power(recording, s);
            ev.mean_power = acc / static_cast<double>(run_end - run_start);
            events.push_back(ev);
        }
        i = run_end;
        while (i < n && !mask.flags[i]) ++i;  // skip the gap that ended the run
    }
    return events;
}

BackgroundStats background_stats(const IQRecording& recording, const ImpulseMask& mask,
                                 int histogram_bins) {
    recording.validate();
    if (mask.flags.size() != recording.size())
        fail(Status::invalid_argument, "mask length does not match recording length");
    return stats_excluding(recording, mask.flags, histogram_bins);
}

std::pair<std::vector<double>, std::vector<int>> kmeans_1d(const std::vector<double>& values,
                                                           int k, int max_iters) {
    if (k < 1) fail(Status::invalid_argument, "cluster count must be at least 1");
    if (static_cast<int>(values.size()) < k)
        fail(Status::invalid_argument,
             "k-means needs at least as many values as clusters (" +
                 std::to_string(values.size()) + " < " + std::to_string(k) + ")");
    if (max_iters < 1) fail(Status::invalid_argument, "max iterations must be at least 1");

    std::vector<double> distinct(values);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (static_cast<int>(distinct.size()) < k)
        fail(Status::degenerate_data,
             "k-means needs at least " + std::to_string(k) + " distinct values, found " +
                 std::to_string(distinct.size()));

    // Quantile initialization over the distinct values: the floor of q*D for
    // quantiles spaced D/k >= 1 apart guarantees k distinct seeds, so no
    // cluster can start out empty.
    std::vector<double> centroids(k);
    for (int j = 0; j < k; ++j) {
        const double q = (2.0 * j + 1.0) / (2.0 * k);
        const auto idx = std::min(distinct.size() - 1,
                                  static_cast<std::size_t>(q * static_cast<double>(distinct.size())));
        centroids[j] = distinct[idx];
    }

    const std::size_t n = values.size();
    std::vector<int> labels(n, -1);
    std::vector<double> sums(k);
    std::vector<std::size_t> counts(k);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_dist = std::fabs(values[i] - centroids[0]);
            for (int j = 1; j < k; ++j) {
                const double dist = std::fabs(values[i] - centroids[j]);
                if (dist < best_dist) {  // strict: ties stay at the lower index
                    best_dist = dist;
                    best = j;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
            sums[best] += values[i];
            ++counts[best];
        }
        if (!changed) break;
        for (int j = 0; j < k; ++j)
            if (counts[j] > 0) centroids[j] = sums[j] / static_cast<double>(counts[j]);
    }

    // Ascending centroids with labels renumbered to match.
    std::vector<int> order(k);
    for (int j = 0; j < k; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return centroids[a] < centroids[b]; });
    std::vector<double> sorted(k);
    std::vector<int> remap(k);
    for (int pos = 0; pos < k; ++pos) {
        sorted[pos] = centroids[order[pos]];
        remap[order[pos]] = pos;
    }
    for (int& label : labels) label = remap[label];
    return {std::move(sorted), std::move(labels)};
}

EstimationReport estimate_profile(const IQRecording& recording, const AnalysisConfig& config) {
    recording.validate();
    config.validate();
    const std::size_t n = recording.size();
    const int k = config.clusters;
    const int M = k + 1;

    EstimationReport report;
    report.config = config;
    report.n_samples = n;
    report.sample_rate_hz = recording.sample_rate_hz;

    ImpulseMask mask = impulse_mask(recording, config.alpha, config.window_len);
    report.threshold = mask.threshold();
    report.w_rms_value = mask.w_rms.front();

    std::vector<BurstEvent> events =
        detect_bursts(mask, recording, config.min_duration_s, config.gap_tolerance_s);
    if (events.empty())
        fail(Status::insufficient_data, "no burst events detected; cannot estimate a profile");
    if (static_cast<int>(events.size()) < k)
        fail(Status::insufficient_data,
             "found " + std::to_string(events.size()) + " burst events, need at least " +
                 std::to_string(k) + " to form clusters");
    if (events.size() < 2)
        fail(Status::insufficient_data,
             "found a single burst event; cannot measure background run lengths");

    std::vector<double> powers(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) powers[e] = events[e].mean_power;
    auto [centroids, labels] = kmeans_1d(powers, k, config.max_kmeans_iters);
    (void)centroids;
    for (std::size_t e = 0; e < events.size(); ++e) events[e].cluster = labels[e] + 1;

    // Sample-occupancy, per-component sigma (I and Q pooled), and mean event
    // length per cluster.
    std::vector<std::size_t> span_samples(M, 0);
    std::vector<std::size_t> event_count(M, 0);
    std::vector<double> sum_sq(M, 0.0);
    std::vector<std::uint8_t> in_event(n, 0);
    for (const BurstEvent& ev : events) {
        const int m = ev.cluster;
        span_samples[m] += ev.end - ev.start;
        ++event_count[m];
        for (std::size_t s = ev.start; s < ev.end; ++s) {
            in_event[s] = 1;
            sum_sq[m] += sample_power(recording, s);
        }
    }
    for (int m = 1; m < M; ++m)
        if (event_count[m] == 0)
            fail(Status::degenerate_data,
                 "cluster " + std::to_string(m) + " received no burst events");

    report.background = stats_excluding(recording, in_event, config.histogram_bins);

    ModelProfile profile;
    profile.p.assign(M, 0.0);
    profile.sigma.assign(M, 0.0);
    std::vector<double> durations(M, 0.0);
    double p_impulsive = 0.0;
    for (int m = 1; m < M; ++m) {
        profile.p[m] = static_cast<double>(span_samples[m]) / static_cast<double>(n);
        p_impulsive += profile.p[m];
        // |z|^2 pools the I and Q second moments, so divide by 2*count.
        profile.sigma[m] =
            std::sqrt(sum_sq[m] / (2.0 * static_cast<double>(span_samples[m])));
        durations[m] =
            static_cast<double>(span_samples[m]) / static_cast<double>(event_count[m]);
    }
    profile.p[0] = 1.0 - p_impulsive;
    // Pooled off-burst second moment about zero (the model noise is zero-mean).
    profile.sigma[0] = std::sqrt(0.5 * (report.background.var_i + report.background.var_q +
                                        report.background.mean_i * report.background.mean_i +
                                        report.background.mean_q * report.background.mean_q));

    double gap_sum = 0.0;
    for (std::size_t e = 1; e < events.size(); ++e)
        gap_sum += static_cast<double>(events[e].start - events[e - 1].end);
    durations[0] = gap_sum / static_cast<double>(events.size() - 1);

    profile.r = correlation_from_duration(durations[0], profile.p[0]);
    try {
        profile.validate();
    } catch (const Error& err) {
        fail(Status::inconsistent_measurement,
             std::string("estimated profile violates model invariants: ") + err.what());
    }

    report.profile = std::move(profile);
    report.durations = std::move(durations);
    report.burst_count = events.size();
    report.bursts = std::move(events);
    return report;
}

void save_profile(const ModelProfile& profile, const std::string& path) {
    profile.validate();
    atomic_write_file(path, "# model profile\n" + profile_body(profile));
}

ModelProfile load_profile(const std::string& path) {
    const auto kvs = load_key_values(path);
    reject_unknown_keys(kvs, path);
    return profile_from_kvs(kvs, path);
}

void save_report(const EstimationReport& report, const std::string& path) {
    std::string out = "# estimation report\n";
    out += "n_samples = " + std::to_string(report.n_samples) + "\n";
    out += "sample_rate_hz = " + format_double(report.sample_rate_hz) + "\n";
    out += "alpha = " + format_double(report.config.alpha) + "\n";
    out += "window_len = " + std::to_string(report.config.window_len) + "\n";
    out += "min_duration_s = " + format_double(report.config.min_duration_s) + "\n";
    out += "gap_tolerance_s = " + format_double(report.config.gap_tolerance_s) + "\n";
    out += "clusters = " + std::to_string(report.config.clusters) + "\n";
    out += "max_kmeans_iters = " + std::to_string(report.config.max_kmeans_iters) + "\n";
    out += "histogram_bins = " + std::to_string(report.config.histogram_bins) + "\n";
    out += "w_rms = " + format_double(report.w_rms_value) + "\n";
    out += "threshold = " + format_double(report.threshold) + "\n";
    out += "burst_count = " + std::to_string(report.burst_count) + "\n";
    out += profile_body(report.profile);
    out += "d = " + format_double_vector(report.durations) + "\n";
    out += "bg_count = " + std::to_string(report.background.count) + "\n";
    out += "bg_mean_i = " + format_double(report.background.mean_i) + "\n";
    out += "bg_mean_q = " + format_double(report.background.mean_q) + "\n";
    out += "bg_var_i = " + format_double(report.background.var_i) + "\n";
    out += "bg_var_q = " + format_double(report.background.var_q) + "\n";
    out += "bg_kurtosis_i = " + format_double(report.background.kurtosis_i) + "\n";
    out += "bg_kurtosis_q = " + format_double(report.background.kurtosis_q) + "\n";
    atomic_write_file(path, out);
}

EstimationReport load_report(const std::string& path) {
    const auto kvs = load_key_values(path);
    reject_unknown_keys(kvs, path);
    EstimationReport report;
    report.profile = profile_from_kvs(kvs, path);
    report.durations = parse_double_vector(require_key(kvs, "d", path), path);
    if (report.durations.size() != report.profile.p.size())
        fail(Status::format_error, path + ": key 'd' disagrees with the length of 'p'");
    report.n_samples =
        static_cast<std::size_t>(parse_int(require_key(kvs, "n_samples", path), path));
    report.sample_rate_hz = parse_double(require_key(kvs, "sample_rate_hz", path), path);
    report.config.alpha = parse_double(require_key(kvs, "alpha", path), path);
    report.config.window_len =
        static_cast<std::size_t>(parse_int(require_key(kvs, "window_len", path), path));
    report.config.min_duration_s = parse_double(require_key(kvs, "min_duration_s", path), path);
    report.config.gap_tolerance_s = parse_double(require_key(kvs, "gap_tolerance_s", path), path);
    report.config.clusters = static_cast<int>(parse_int(require_key(kvs, "clusters", path), path));
    report.config.max_kmeans_iters =
        static_cast<int>(parse_int(require_key(kvs, "max_kmeans_iters", path), path));
    report.config.histogram_bins =
        static_cast<int>(parse_int(require_key(kvs, "histogram_bins", path), path));
    report.w_rms_value = parse_double(require_key(kvs, "w_rms", path), path);
    report.threshold = parse_double(require_key(kvs, "threshold", path), path);
    report.burst_count =
        static_cast<std::size_t>(parse_int(require_key(kvs, "burst_count", path), path));
    report.background.count =
        static_cast<std::size_t>(parse_int(require_key(kvs, "bg_count", path), path));
    report.background.mean_i = parse_double(require_key(kvs, "bg_mean_i", path), path);
    report.background.mean_q = parse_double(require_key(kvs, "bg_mean_q", path), path);
    report.background.var_i = parse_double(require_key(kvs, "bg_var_i", path), path);
    report.background.var_q = parse_double(require_key(kvs, "bg_var_q", path), path);
    report.background.kurtosis_i = parse_double(require_key(kvs, "bg_kurtosis_i", path), path);
    report.background.kurtosis_q = parse_double(require_key(kvs, "bg_kurtosis_q", path), path);
    return report;
}

void validate_report(const EstimationReport& report, double r_tolerance) {
    report.profile.validate();
    if (report.durations.size() != report.profile.p.size())
        fail(Status::invalid_argument, "report durations do not match the state count");
    for (double d : report.durations)
        if (!(d > 0.0))
            fail(Status::invalid_argument, "report durations must be positive");
    const double r_check =
        correlation_from_duration(report.durations[0], report.profile.p[0]);
    if (std::fabs(r_check - report.profile.r) > r_tolerance)
        fail(Status::inconsistent_measurement,
             "duration-derived correlation " + format_double(r_check) +
                 " disagrees with reported r " + format_double(report.profile.r));
}

std::string bursts_to_csv(const std::vector<BurstEvent>& bursts, double sample_rate_hz) {
    std::string out = "start,end,duration_s,mean_power,cluster\n";
    char buf[160];
    for (const BurstEvent& ev : bursts) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.9g,%.9g,%d\n", ev.start, ev.end,
                      static_cast<double>(ev.end - ev.start) / sample_rate_hz, ev.mean_power,
                      ev.cluster);
        out += buf;
    }
    return out;
}

std::string histogram_to_csv(const BackgroundStats& stats) {
    std::string out = "bin_lo,bin_hi,count_i,count_q\n";
    const std::size_t bins = stats.hist_i.counts.size();
    const double width = (stats.hist_i.hi - stats.hist_i.lo) / static_cast<double>(bins);
    char buf[160];
    for (std::size_t b = 0; b < bins; ++b) {
        const double lo = stats.hist_i.lo + width * static_cast<double>(b);
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%llu,%llu\n", lo, lo + width,
                      static_cast<unsigned long long>(stats.hist_i.counts[b]),
                      static_cast<unsigned long long>(stats.hist_q.counts[b]));
        out += buf;
    }
    return out;
}

}  // namespace evin
