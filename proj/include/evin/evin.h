/*
 * evin: bursty impulsive-interference modeling toolkit.
 *
 * C interface to the core library: Markov-Middleton noise profiles,
 * IQ recording analysis and parameter estimation, noise synthesis,
 * noise-state-aware MAP (BCJR) and AWGN-assumption detectors, LDPC
 * coding, and the coded-BPSK Monte-Carlo BER harness.
 *
 * Conventions:
 *   - Every fallible call returns evin_status; EVIN_OK (0) means success.
 *   - On failure, evin_last_error() returns a thread-local description of
 *     the most recent failing call on this thread.
 *   - Objects are opaque handles created by *_create/_load/_generate calls
 *     and released with the matching *_free (safe on NULL).
 *   - Strings returned through char** are heap-allocated and must be
 *     released with evin_string_free.
 */

#ifndef EVIN_H
#define EVIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(EVIN_BUILD) && defined(__GNUC__)
#define EVIN_API __attribute__((visibility("default")))
#else
#define EVIN_API
#endif

typedef enum evin_status {
    EVIN_OK = 0,
    EVIN_ERR_INVALID_ARGUMENT = 1,
    EVIN_ERR_IO = 2,
    EVIN_ERR_FORMAT = 3,
    EVIN_ERR_USAGE = 4,
    EVIN_ERR_INSUFFICIENT_DATA = 5,
    EVIN_ERR_INCONSISTENT_MEASUREMENT = 6,
    EVIN_ERR_NUMERIC = 7,
    EVIN_ERR_DEGENERATE_DATA = 8,
    EVIN_ERR_ENCODING_SETUP = 9,
    EVIN_ERR_INTERNAL = 10
} evin_status;

typedef struct evin_profile evin_profile;     /* Markov-Middleton parameter set */
typedef struct evin_recording evin_recording; /* complex baseband samples + rate */
typedef struct evin_analysis evin_analysis;   /* mask + burst events + diagnostics */
typedef struct evin_report evin_report;       /* full estimation output */
typedef struct evin_code evin_code;           /* LDPC parity-check structure */

/* ------------------------------------------------------------ diagnostics */

/* Thread-local message describing this thread's most recent failure. Never
 * NULL; empty string when no call has failed yet. */
EVIN_API const char* evin_last_error(void);

/* Static name for a status code, e.g. "format_error". */
EVIN_API const char* evin_status_name(evin_status status);

/* Releases a string returned through a char** out-parameter. */
EVIN_API void evin_string_free(char* text);

/* Writes text to path atomically (temp file + rename): the destination is
 * either fully written or untouched. */
EVIN_API evin_status evin_write_text_file(const char* path, const char* text);

/* --------------------------------------------------------------- profiles */

/* Builds a profile from per-state probabilities p[m] and per-component
 * standard deviations sigma[m] (m = 0..states-1) plus correlation r. States
 * are reordered ascending by sigma so index 0 is the background state. */
EVIN_API evin_status evin_profile_create(const double* p, const double* sigma, size_t states,
                                         double r, evin_profile** out);

/* Canonical Class A parameterization: Poisson state probabilities from
 * impulsive index a, variances from background-to-impulse ratio gamma and
 * total power sigma2, over m states, with correlation r. */
EVIN_API evin_status evin_profile_middleton(double a, double gamma, double sigma2, int states,
                                            double r, evin_profile** out);

/* Key-value text files; evin_profile_load also accepts report files. */
EVIN_API evin_status evin_profile_load(const char* path, evin_profile** out);
EVIN_API evin_status evin_profile_save(const evin_profile* profile, const char* path);

/* Number of states; 0 if profile is NULL. */
EVIN_API size_t evin_profile_states(const evin_profile* profile);

/* Copies out any of p (states doubles), sigma (states doubles), r; each
 * destination may be NULL to skip. */
EVIN_API evin_status evin_profile_get(const evin_profile* profile, double* p, double* sigma,
                                      double* r);

/* Per-component mixture power: sum_m p[m] sigma[m]^2. */
EVIN_API evin_status evin_profile_mixture_power(const evin_profile* profile, double* out);

/* Uniformly rescales sigma so the convention's reference power ("total"
 * mixture power or "background" sigma_0^2) meets Eb/N0 = snr_db for
 * unit-energy BPSK at the given code rate. */
EVIN_API evin_status evin_profile_scale_to_snr(const evin_profile* profile, double snr_db,
                                               const char* convention, double code_rate,
                                               evin_profile** out);

EVIN_API void evin_profile_free(evin_profile* profile);

/* ------------------------------------------------------------- recordings */

/* Formats: "f32le" (interleaved little-endian float32 I,Q), "s16le"
 * (interleaved little-endian int16 I,Q), "csv" ("i,q" header + one row per
 * sample). sample_rate_hz must be positive. */
EVIN_API evin_status evin_recording_load(const char* path, const char* format,
                                         double sample_rate_hz, evin_recording** out);
EVIN_API evin_status evin_recording_save(const evin_recording* recording, const char* path,
                                         const char* format);

/* Sample count; 0 if recording is NULL. */
EVIN_API size_t evin_recording_size(const evin_recording* recording);
EVIN_API evin_status evin_recording_sample_rate(const evin_recording* recording, double* out);

/* Root-mean-square amplitude sqrt(mean |z|^2) over the whole recording. */
EVIN_API evin_status evin_recording_rms(const evin_recording* recording, double* out);

EVIN_API void evin_recording_free(evin_recording* recording);

/* -------------------------------------------------------------- synthesis */

/* Draws n samples of Markov-chain Gaussian-mixture noise from the profile.
 * complex_iq nonzero: independent I and Q per state; zero: real noise in I,
 * zeros in Q. Identical (profile, n, seed, mode) input is bit-reproducible,
 * and the state path does not depend on the mode. */
EVIN_API evin_status evin_synthesize(const evin_profile* profile, size_t n, uint64_t seed,
                                     int complex_iq, double sample_rate_hz,
                                     evin_recording** out);

/* ---------------------------------------------------------------- analysis */

typedef struct evin_analysis_config {
    double alpha;           /* threshold scale: th = alpha * W_rms */
    double min_duration_s;  /* bursts shorter than this are dropped */
    double gap_tolerance_s; /* unflagged gaps up to this are bridged */
    int clusters;           /* impulsive clusters (model states - 1) */
    int max_kmeans_iters;
    size_t window_len;      /* 0 = one global threshold window */
    int histogram_bins;
} evin_analysis_config;

/* Fills the documented defaults (alpha 3, 0.5 ms minimum, 0.3 us gap,
 * 3 clusters, 100 iterations, global window, 101 bins). */
EVIN_API void evin_analysis_config_init(evin_analysis_config* config);

/* Threshold mask + burst segmentation + off-mask background statistics,
 * without parameter estimation. */
EVIN_API evin_status evin_analyze(const evin_recording* recording,
                                  const evin_analysis_config* config, evin_analysis** out);

/* Any destination may be NULL to skip. moments holds mean_i, mean_q, var_i,
 * var_q, excess_kurtosis_i, excess_kurtosis_q. */
EVIN_API evin_status evin_analysis_summary(const evin_analysis* analysis, double* threshold,
                                           double* w_rms, uint64_t* flagged_samples,
                                           uint64_t* burst_count, uint64_t* background_count,
                                           double moments[6]);

/* CSV tables: bursts (start,end,duration_s,mean_power,cluster; cluster 0 =
 * unlabeled) and the background histogram (bin_lo,bin_hi,count_i,count_q). */
EVIN_API evin_status evin_analysis_bursts_csv(const evin_analysis* analysis, char** out);
EVIN_API evin_status evin_analysis_histogram_csv(const evin_analysis* analysis, char** out);

EVIN_API void evin_analysis_free(evin_analysis* analysis);

/* ------------------------------------------------------------- estimation */

/* Full pipeline: mask -> bursts -> k-means clustering of burst mean powers
 * -> per-state probabilities, sigmas, mean durations, and correlation r from
 * the mean background run length. */
EVIN_API evin_status evin_estimate(const evin_recording* recording,
                                   const evin_analysis_config* config, evin_report** out);

EVIN_API evin_status evin_report_load(const char* path, evin_report** out);
EVIN_API evin_status evin_report_save(const evin_report* report, const char* path);

/* The estimated profile as a standalone handle. */
EVIN_API evin_status evin_report_profile(const evin_report* report, evin_profile** out);

/* State count; 0 if report is NULL. */
EVIN_API size_t evin_report_states(const evin_report* report);

/* Copies out any of: d (states doubles, mean run lengths in samples),
 * burst_count, moments (layout as in evin_analysis_summary, computed over
 * samples outside every detected burst). NULL skips a field. */
EVIN_API evin_status evin_report_get(const evin_report* report, double* d, uint64_t* burst_count,
                                     double moments[6]);

/* CSV tables mirroring evin_analysis_*, from the estimation's own events. */
EVIN_API evin_status evin_report_bursts_csv(const evin_report* report, char** out);
EVIN_API evin_status evin_report_histogram_csv(const evin_report* report, char** out);

/* Consistency check: r recomputed from d[0] and p[0] must match the stored
 * r within r_tolerance. */
EVIN_API evin_status evin_report_validate(const evin_report* report, double r_tolerance);

EVIN_API void evin_report_free(evin_report* report);

/* ---------------------------------------------------------------- detectors */

/* AWGN-assumption LLRs for unit-energy BPSK: llr[i] = 2 y[i] / noise_var.
 * Positive favors symbol +1 (bit 0). out must hold n doubles. */
EVIN_API evin_status evin_awgn_llrs(const double* y, size_t n, double noise_var, double* out);

/* Noise-state-aware MAP LLRs: log-domain forward-backward over the hidden
 * noise-state chain. priors may be NULL (equiprobable symbols) or n prior
 * LLRs in the same convention. out must hold n doubles. */
EVIN_API evin_status evin_bcjr_llrs(const double* y, size_t n, const evin_profile* profile,
                                    const double* priors, double* out);

/* ------------------------------------------------------------------ coding */

/* alist text import/export. */
EVIN_API evin_status evin_code_load(const char* path, evin_code** out);
EVIN_API evin_status evin_code_save(const evin_code* code, const char* path);

/* Deterministic regular (3,6) rate-1/2 construction (progressive edge
 * growth); n must be even and at least 6. */
EVIN_API evin_status evin_code_generate(size_t n, evin_code** out);

/* Codeword length / information length; 0 if code is NULL. */
EVIN_API size_t evin_code_n(const evin_code* code);
EVIN_API size_t evin_code_k(const evin_code* code);

/* Systematic encoding: info holds k bits (0/1), out_codeword n bits. */
EVIN_API evin_status evin_code_encode(const evin_code* code, const uint8_t* info,
                                      uint8_t* out_codeword);

/* Log-domain sum-product decoding, flooding schedule, early exit on a zero
 * syndrome. out_info holds k hard decisions; converged/iterations may be
 * NULL. Non-convergence is reported via the flag, not an error. */
EVIN_API evin_status evin_code_decode(const evin_code* code, const double* llrs, int max_iters,
                                      uint8_t* out_info, int* converged, int* iterations);

EVIN_API void evin_code_free(evin_code* code);

/* ------------------------------------------------------------- BER harness */

typedef struct evin_ber_config {
    const double* snr_grid_db; /* Eb/N0 grid, dB */
    size_t snr_count;
    const char* convention; /* "total" | "background" */
    const char* detector;   /* "bcjr" | "awgn" */
    uint64_t seed;
    size_t max_codewords;  /* per-point budget */
    size_t target_errors;  /* per-point early stop */
    int max_decoder_iters;
    int threads; /* 0 = all hardware threads; never affects results */
} evin_ber_config;

typedef struct evin_ber_point {
    double snr_db;
    double ber;
    uint64_t bit_errors;
    uint64_t bits;
    uint64_t codewords;
    double convergence_rate;
    int low_confidence; /* nonzero: stopped by budget before target_errors */
} evin_ber_point;

/* Fills defaults: total convention, bcjr detector, seed 1, 20000 codewords,
 * 100 target errors, 50 decoder iterations, all threads; the SNR grid is
 * left empty and must be supplied by the caller. */
EVIN_API void evin_ber_config_init(evin_ber_config* config);

/* Runs the Monte-Carlo sweep; out_points must hold snr_count entries.
 * Identical (profile, code, config) input reproduces identical points,
 * independent of the thread count. */
EVIN_API evin_status evin_run_ber(const evin_profile* profile, const evin_code* code,
                                  const evin_ber_config* config, evin_ber_point* out_points);

/* CSV with columns snr_db,convention,detector,ber,bit_errors,bits,codewords,
 * convergence_rate,seed from points produced by evin_run_ber. */
EVIN_API evin_status evin_ber_points_csv(const evin_ber_point* points, size_t count,
                                         const char* convention, const char* detector,
                                         uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif /* EVIN_H */
