#include "evin/evin.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "ber.hpp"
#include "detector.hpp"
#include "error.hpp"
#include "ldpc.hpp"
#include "model.hpp"
#include "recording.hpp"
#include "synth.hpp"
#include "textio.hpp"

struct evin_profile {
    evin::ModelProfile value;
};
struct evin_recording {
    evin::IQRecording value;
};
struct evin_analysis {
    evin::ImpulseMask mask;
    std::vector<evin::BurstEvent> bursts;
    evin::BackgroundStats background;
    double sample_rate_hz = 0.0;
};
struct evin_report {
    evin::EstimationReport value;
};
struct evin_code {
    evin::LdpcCode value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

evin_status map_status(evin::Status status) {
    switch (status) {
        case evin::Status::ok: return EVIN_OK;
        case evin::Status::invalid_argument: return EVIN_ERR_INVALID_ARGUMENT;
        case evin::Status::io_error: return EVIN_ERR_IO;
        case evin::Status::format_error: return EVIN_ERR_FORMAT;
        case evin::Status::usage_error: return EVIN_ERR_USAGE;
        case evin::Status::insufficient_data: return EVIN_ERR_INSUFFICIENT_DATA;
        case evin::Status::inconsistent_measurement: return EVIN_ERR_INCONSISTENT_MEASUREMENT;
        case evin::Status::numeric_error: return EVIN_ERR_NUMERIC;
        case evin::Status::degenerate_data: return EVIN_ERR_DEGENERATE_DATA;
        case evin::Status::encoding_setup: return EVIN_ERR_ENCODING_SETUP;
    }
    return EVIN_ERR_INTERNAL;
}

template <typename Fn>
evin_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return EVIN_OK;
    } catch (const evin::Error& err) {
        set_error(err.what());
        return map_status(err.status());
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return EVIN_ERR_INTERNAL;
    } catch (const std::exception& err) {
        set_error(err.what());
        return EVIN_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown failure");
        return EVIN_ERR_INTERNAL;
    }
}

void require(bool condition, const char* message) {
    if (!condition) evin::fail(evin::Status::invalid_argument, message);
}

char* copy_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

evin::AnalysisConfig to_config(const evin_analysis_config* config) {
    require(config != nullptr, "config must not be NULL");
    evin::AnalysisConfig out;
    out.alpha = config->alpha;
    out.min_duration_s = config->min_duration_s;
    out.gap_tolerance_s = config->gap_tolerance_s;
    out.clusters = config->clusters;
    out.max_kmeans_iters = config->max_kmeans_iters;
    out.window_len = config->window_len;
    out.histogram_bins = config->histogram_bins;
    return out;
}

void fill_moments(const evin::BackgroundStats& stats, double moments[6]) {
    moments[0] = stats.mean_i;
    moments[1] = stats.mean_q;
    moments[2] = stats.var_i;
    moments[3] = stats.var_q;
    moments[4] = stats.kurtosis_i;
    moments[5] = stats.kurtosis_q;
}

}  // namespace

extern "C" {

const char* evin_last_error(void) { return g_last_error.c_str(); }

const char* evin_status_name(evin_status status) {
    switch (status) {
        case EVIN_OK: return "ok";
        case EVIN_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case EVIN_ERR_IO: return "io_error";
        case EVIN_ERR_FORMAT: return "format_error";
        case EVIN_ERR_USAGE: return "usage_error";
        case EVIN_ERR_INSUFFICIENT_DATA: return "insufficient_data";
        case EVIN_ERR_INCONSISTENT_MEASUREMENT: return "inconsistent_measurement";
        case EVIN_ERR_NUMERIC: return "numeric_error";
        case EVIN_ERR_DEGENERATE_DATA: return "degenerate_data";
        case EVIN_ERR_ENCODING_SETUP: return "encoding_setup";
        case EVIN_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

void evin_string_free(char* text) { std::free(text); }

evin_status evin_write_text_file(const char* path, const char* text) {
    return guarded([&] {
        require(path != nullptr, "path must not be NULL");
        require(text != nullptr, "text must not be NULL");
        evin::atomic_write_file(path, text);
    });
}

/* --------------------------------------------------------------- profiles */

evin_status evin_profile_create(const double* p, const double* sigma, size_t states, double r,
                                evin_profile** out) {
    return guarded([&] {
        require(p != nullptr && sigma != nullptr, "p and sigma must not be NULL");
        require(out != nullptr, "out must not be NULL");
        require(states > 0, "state count must be positive");
        evin::ModelProfile profile = evin::make_profile(
            std::vector<double>(p, p + states), std::vector<double>(sigma, sigma + states), r);
        *out = new evin_profile{std::move(profile)};
    });
}

evin_status evin_profile_middleton(double a, double gamma, double sigma2, int states, double r,
                                   evin_profile** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        evin::MiddletonParams params;
        params.A = a;
        params.Gamma = gamma;
        params.sigma2 = sigma2;
        params.M = states;
        *out = new evin_profile{evin::profile_from_middleton(params, r)};
    });
}

evin_status evin_profile_load(const char* path, evin_profile** out) {
    return guarded([&] {
        require(path != nullptr, "path must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_profile{evin::load_profile(path)};
    });
}

evin_status evin_profile_save(const evin_profile* profile, const char* path) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        require(path != nullptr, "path must not be NULL");
        evin::save_profile(profile->value, path);
    });
}

size_t evin_profile_states(const evin_profile* profile) {
    return profile ? profile->value.p.size() : 0;
}

evin_status evin_profile_get(const evin_profile* profile, double* p, double* sigma, double* r) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        const size_t states = profile->value.p.size();
        if (p) std::memcpy(p, profile->value.p.data(), states * sizeof(double));
        if (sigma) std::memcpy(sigma, profile->value.sigma.data(), states * sizeof(double));
        if (r) *r = profile->value.r;
    });
}

evin_status evin_profile_mixture_power(const evin_profile* profile, double* out) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = profile->value.mixture_power();
    });
}

evin_status evin_profile_scale_to_snr(const evin_profile* profile, double snr_db,
                                      const char* convention, double code_rate,
                                      evin_profile** out) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        require(convention != nullptr, "convention must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_profile{evin::scale_profile_to_snr(
            profile->value, snr_db, evin::parse_convention(convention), code_rate)};
    });
}

void evin_profile_free(evin_profile* profile) { delete profile; }

/* ------------------------------------------------------------- recordings */

evin_status evin_recording_load(const char* path, const char* format, double sample_rate_hz,
                                evin_recording** out) {
    return guarded([&] {
        require(path != nullptr, "path must not be NULL");
        require(format != nullptr, "format must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_recording{
            evin::load_iq(path, evin::parse_iq_format(format), sample_rate_hz)};
    });
}

evin_status evin_recording_save(const evin_recording* recording, const char* path,
                                const char* format) {
    return guarded([&] {
        require(recording != nullptr, "recording must not be NULL");
        require(path != nullptr, "path must not be NULL");
        require(format != nullptr, "format must not be NULL");
        evin::write_iq(recording->value, path, evin::parse_iq_format(format));
    });
}

size_t evin_recording_size(const evin_recording* recording) {
    return recording ? recording->value.size() : 0;
}

evin_status evin_recording_sample_rate(const evin_recording* recording, double* out) {
    return guarded([&] {
        require(recording != nullptr, "recording must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = recording->value.sample_rate_hz;
    });
}

evin_status evin_recording_rms(const evin_recording* recording, double* out) {
    return guarded([&] {
        require(recording != nullptr, "recording must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = evin::rms(recording->value);
    });
}

void evin_recording_free(evin_recording* recording) { delete recording; }

/* -------------------------------------------------------------- synthesis */

evin_status evin_synthesize(const evin_profile* profile, size_t n, uint64_t seed, int complex_iq,
                            double sample_rate_hz, evin_recording** out) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        require(out != nullptr, "out must not be NULL");
        const evin::NoiseRealization noise = evin::synthesize_noise(
            profile->value, n, seed,
            complex_iq ? evin::SynthMode::complex_iq : evin::SynthMode::real);
        *out = new evin_recording{noise.to_recording(sample_rate_hz)};
    });
}

/* --------------------------------------------------------------- analysis */

void evin_analysis_config_init(evin_analysis_config* config) {
    if (!config) return;
    const evin::AnalysisConfig defaults;
    config->alpha = defaults.alpha;
    config->min_duration_s = defaults.min_duration_s;
    config->gap_tolerance_s = defaults.gap_tolerance_s;
    config->clusters = defaults.clusters;
    config->max_kmeans_iters = defaults.max_kmeans_iters;
    config->window_len = defaults.window_len;
    config->histogram_bins = defaults.histogram_bins;
}

evin_status evin_analyze(const evin_recording* recording, const evin_analysis_config* config,
                         evin_analysis** out) {
    return guarded([&] {
        require(recording != nullptr, "recording must not be NULL");
        require(out != nullptr, "out must not be NULL");
        const evin::AnalysisConfig cfg = to_config(config);
        cfg.validate();
        auto analysis = std::make_unique<evin_analysis>();
        analysis->mask = evin::impulse_mask(recording->value, cfg.alpha, cfg.window_len);
        analysis->bursts = evin::detect_bursts(analysis->mask, recording->value,
                                               cfg.min_duration_s, cfg.gap_tolerance_s);
        analysis->background =
            evin::background_stats(recording->value, analysis->mask, cfg.histogram_bins);
        analysis->sample_rate_hz = recording->value.sample_rate_hz;
        *out = analysis.release();
    });
}

evin_status evin_analysis_summary(const evin_analysis* analysis, double* threshold, double* w_rms,
                                  uint64_t* flagged_samples, uint64_t* burst_count,
                                  uint64_t* background_count, double moments[6]) {
    return guarded([&] {
        require(analysis != nullptr, "analysis must not be NULL");
        if (threshold) *threshold = analysis->mask.threshold();
        if (w_rms) *w_rms = analysis->mask.w_rms.front();
        if (flagged_samples) *flagged_samples = analysis->mask.flagged_count();
        if (burst_count) *burst_count = analysis->bursts.size();
        if (background_count) *background_count = analysis->background.count;
        if (moments) fill_moments(analysis->background, moments);
    });
}

evin_status evin_analysis_bursts_csv(const evin_analysis* analysis, char** out) {
    return guarded([&] {
        require(analysis != nullptr, "analysis must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = copy_string(evin::bursts_to_csv(analysis->bursts, analysis->sample_rate_hz));
    });
}

evin_status evin_analysis_histogram_csv(const evin_analysis* analysis, char** out) {
    return guarded([&] {
        require(analysis != nullptr, "analysis must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = copy_string(evin::histogram_to_csv(analysis->background));
    });
}

void evin_analysis_free(evin_analysis* analysis) { delete analysis; }

/* ------------------------------------------------------------- estimation */

evin_status evin_estimate(const evin_recording* recording, const evin_analysis_config* config,
                          evin_report** out) {
    return guarded([&] {
        require(recording != nullptr, "recording must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_report{evin::estimate_profile(recording->value, to_config(config))};
    });
}

evin_status evin_report_load(const char* path, evin_report** out) {
    return guarded([&] {
        require(path != nullptr, "path must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_report{evin::load_report(path)};
    });
}

evin_status evin_report_save(const evin_report* report, const char* path) {
    return guarded([&] {
        require(report != nullptr, "report must not be NULL");
        require(path != nullptr, "path must not be NULL");
        evin::save_report(report->value, path);
    });
}

evin_status evin_report_profile(const evin_report* report, evin_profile** out) {
    return guarded([&] {
        require(report != nullptr, "report must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_profile{report->value.profile};
    });
}

size_t evin_report_states(const evin_report* report) {
    return report ? report->value.profile.p.size() : 0;
}

evin_status evin_report_get(const evin_report* report, double* d, uint64_t* burst_count,
                            double moments[6]) {
    return guarded([&] {
        require(report != nullptr, "report must not be NULL");
        if (d)
            std::memcpy(d, report->value.durations.data(),
                        report->value.durations.size() * sizeof(double));
        if (burst_count) *burst_count = report->value.burst_count;
        if (moments) fill_moments(report->value.background, moments);
    });
}

evin_status evin_report_bursts_csv(const evin_report* report, char** out) {
    return guarded([&] {
        require(report != nullptr, "report must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = copy_string(
            evin::bursts_to_csv(report->value.bursts, report->value.sample_rate_hz));
    });
}

evin_status evin_report_histogram_csv(const evin_report* report, char** out) {
    return guarded([&] {
        require(report != nullptr, "report must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = copy_string(evin::histogram_to_csv(report->value.background));
    });
}

evin_status evin_report_validate(const evin_report* report, double r_tolerance) {
    return guarded([&] {
        require(report != nullptr, "report must not be NULL");
        evin::validate_report(report->value, r_tolerance);
    });
}

void evin_report_free(evin_report* report) { delete report; }

/* -------------------------------------------------------------- detectors */

evin_status evin_awgn_llrs(const double* y, size_t n, double noise_var, double* out) {
    return guarded([&] {
        require(y != nullptr || n == 0, "y must not be NULL");
        require(out != nullptr || n == 0, "out must not be NULL");
        const std::vector<double> llrs =
            evin::awgn_llrs(std::vector<double>(y, y + n), noise_var);
        std::memcpy(out, llrs.data(), n * sizeof(double));
    });
}

evin_status evin_bcjr_llrs(const double* y, size_t n, const evin_profile* profile,
                           const double* priors, double* out) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        require(y != nullptr || n == 0, "y must not be NULL");
        require(out != nullptr || n == 0, "out must not be NULL");
        const std::vector<double> received(y, y + n);
        std::vector<double> prior_vec;
        const std::vector<double>* prior_ptr = nullptr;
        if (priors) {
            prior_vec.assign(priors, priors + n);
            prior_ptr = &prior_vec;
        }
        const std::vector<double> llrs = evin::bcjr_llrs(received, profile->value, prior_ptr);
        std::memcpy(out, llrs.data(), n * sizeof(double));
    });
}

/* ------------------------------------------------------------------ coding */

evin_status evin_code_load(const char* path, evin_code** out) {
    return guarded([&] {
        require(path != nullptr, "path must not be NULL");
        require(out != nullptr, "out must not be NULL");
        *out = new evin_code{evin::load_code(path)};
    });
}

evin_status evin_code_save(const evin_code* code, const char* path) {
    return guarded([&] {
        require(code != nullptr, "code must not be NULL");
        require(path != nullptr, "path must not be NULL");
        evin::save_code(code->value, path);
    });
}

evin_status evin_code_generate(size_t n, evin_code** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        *out = new evin_code{evin::make_regular_code(n)};
    });
}

size_t evin_code_n(const evin_code* code) { return code ? code->value.n : 0; }

size_t evin_code_k(const evin_code* code) { return code ? code->value.k() : 0; }

evin_status evin_code_encode(const evin_code* code, const uint8_t* info, uint8_t* out_codeword) {
    return guarded([&] {
        require(code != nullptr, "code must not be NULL");
        require(info != nullptr, "info must not be NULL");
        require(out_codeword != nullptr, "out_codeword must not be NULL");
        const std::vector<std::uint8_t> codeword =
            evin::encode(std::vector<std::uint8_t>(info, info + code->value.k()), code->value);
        std::memcpy(out_codeword, codeword.data(), codeword.size());
    });
}

evin_status evin_code_decode(const evin_code* code, const double* llrs, int max_iters,
                             uint8_t* out_info, int* converged, int* iterations) {
    return guarded([&] {
        require(code != nullptr, "code must not be NULL");
        require(llrs != nullptr, "llrs must not be NULL");
        require(out_info != nullptr, "out_info must not be NULL");
        const evin::DecodeResult result = evin::decode(
            std::vector<double>(llrs, llrs + code->value.n), code->value, max_iters);
        std::memcpy(out_info, result.info_bits.data(), result.info_bits.size());
        if (converged) *converged = result.converged ? 1 : 0;
        if (iterations) *iterations = result.iterations;
    });
}

void evin_code_free(evin_code* code) { delete code; }

/* ------------------------------------------------------------- BER harness */

void evin_ber_config_init(evin_ber_config* config) {
    if (!config) return;
    const evin::BerConfig defaults;
    config->snr_grid_db = nullptr;
    config->snr_count = 0;
    config->convention = "total";
    config->detector = "bcjr";
    config->seed = defaults.seed;
    config->max_codewords = defaults.max_codewords;
    config->target_errors = defaults.target_errors;
    config->max_decoder_iters = defaults.max_decoder_iters;
    config->threads = defaults.threads;
}

evin_status evin_run_ber(const evin_profile* profile, const evin_code* code,
                         const evin_ber_config* config, evin_ber_point* out_points) {
    return guarded([&] {
        require(profile != nullptr, "profile must not be NULL");
        require(code != nullptr, "code must not be NULL");
        require(config != nullptr, "config must not be NULL");
        require(out_points != nullptr, "out_points must not be NULL");
        require(config->snr_grid_db != nullptr || config->snr_count == 0,
                "snr_grid_db must not be NULL");
        require(config->convention != nullptr, "convention must not be NULL");
        require(config->detector != nullptr, "detector must not be NULL");
        evin::BerConfig cfg;
        cfg.snr_grid_db.assign(config->snr_grid_db, config->snr_grid_db + config->snr_count);
        cfg.convention = evin::parse_convention(config->convention);
        cfg.detector = evin::parse_detector(config->detector);
        cfg.seed = config->seed;
        cfg.max_codewords = config->max_codewords;
        cfg.target_errors = config->target_errors;
        cfg.max_decoder_iters = config->max_decoder_iters;
        cfg.threads = config->threads;
        const std::vector<evin::BerPoint> points =
            evin::run_ber(profile->value, code->value, cfg);
        for (std::size_t i = 0; i < points.size(); ++i) {
            out_points[i].snr_db = points[i].snr_db;
            out_points[i].ber = points[i].ber;
            out_points[i].bit_errors = points[i].bit_errors;
            out_points[i].bits = points[i].bits;
            out_points[i].codewords = points[i].codewords;
            out_points[i].convergence_rate = points[i].convergence_rate;
            out_points[i].low_confidence = points[i].low_confidence ? 1 : 0;
        }
    });
}

evin_status evin_ber_points_csv(const evin_ber_point* points, size_t count,
                                const char* convention, const char* detector, uint64_t seed,
                                char** out) {
    return guarded([&] {
        require(points != nullptr || count == 0, "points must not be NULL");
        require(convention != nullptr, "convention must not be NULL");
        require(detector != nullptr, "detector must not be NULL");
        require(out != nullptr, "out must not be NULL");
        std::vector<evin::BerPoint> native(count);
        for (size_t i = 0; i < count; ++i) {
            native[i].snr_db = points[i].snr_db;
            native[i].ber = points[i].ber;
            native[i].bit_errors = points[i].bit_errors;
            native[i].bits = points[i].bits;
            native[i].codewords = points[i].codewords;
            native[i].convergence_rate = points[i].convergence_rate;
            native[i].low_confidence = points[i].low_confidence != 0;
        }
        *out = copy_string(evin::ber_to_csv(native, evin::parse_convention(convention),
                                            evin::parse_detector(detector), seed));
    });
}

}  // extern "C"
