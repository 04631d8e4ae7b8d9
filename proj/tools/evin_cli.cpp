// Command-line front end over the evin C API. Subcommands:
//   analyze   threshold mask + burst segmentation + background diagnostics
//   estimate  full parameter estimation to a report file
//   synth     noise synthesis to an IQ file
//   ber       coded-BPSK Monte-Carlo BER sweep
//   code-gen  deterministic regular (3,6) LDPC construction
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "evin/evin.h"

namespace {

struct Fail {
    int exit_code;
    std::string message;
};

void check(evin_status status, const std::string& context) {
    if (status == EVIN_OK) return;
    throw Fail{status == EVIN_ERR_USAGE ? 2 : 1,
               context + ": " + evin_status_name(status) + ": " + evin_last_error()};
}

template <typename T, void (*FreeFn)(T*)>
class Owned {
public:
    Owned() = default;
    ~Owned() { reset(); }
    Owned(const Owned&) = delete;
    Owned& operator=(const Owned&) = delete;
    T** out() {
        reset();
        return &ptr_;
    }
    T* get() const { return ptr_; }

private:
    void reset() {
        if (ptr_) FreeFn(ptr_);
        ptr_ = nullptr;
    }
    T* ptr_ = nullptr;
};

using Profile = Owned<evin_profile, evin_profile_free>;
using Recording = Owned<evin_recording, evin_recording_free>;
using Analysis = Owned<evin_analysis, evin_analysis_free>;
using Report = Owned<evin_report, evin_report_free>;
using Code = Owned<evin_code, evin_code_free>;

class OwnedString {
public:
    OwnedString() = default;
    ~OwnedString() { evin_string_free(text_); }
    OwnedString(const OwnedString&) = delete;
    OwnedString& operator=(const OwnedString&) = delete;
    char** out() {
        evin_string_free(text_);
        text_ = nullptr;
        return &text_;
    }
    const char* get() const { return text_ ? text_ : ""; }

private:
    char* text_ = nullptr;
};

std::string path_stem(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

void write_file(const std::string& path, const char* text, const char* what) {
    check(evin_write_text_file(path.c_str(), text), std::string("writing ") + what);
    std::printf("%s: %s\n", what, path.c_str());
}

void print_moments(const double moments[6]) {
    std::printf("background mean (I, Q)            = %.6g, %.6g\n", moments[0], moments[1]);
    std::printf("background variance (I, Q)        = %.6g, %.6g\n", moments[2], moments[3]);
    std::printf("background excess kurtosis (I, Q) = %.6g, %.6g\n", moments[4], moments[5]);
}

// Shared flags for the analysis-driven subcommands.
struct AnalyzeOptions {
    std::string in_path;
    std::string format;
    double rate = 2.6e6;
    evin_analysis_config config{};
    std::string bursts_path;
    std::string hist_path;
};

void add_analysis_flags(CLI::App* sub, AnalyzeOptions& opts, bool clustering) {
    evin_analysis_config_init(&opts.config);
    sub->add_option("--in", opts.in_path, "input IQ file")->required();
    sub->add_option("--format", opts.format, "input format: f32le | s16le | csv")->required();
    sub->add_option("--rate", opts.rate, "sample rate in Hz (default 2.6e6)");
    sub->add_option("--alpha", opts.config.alpha, "threshold scale: th = alpha * W_rms");
    sub->add_option("--min-duration", opts.config.min_duration_s,
                    "minimum burst duration in seconds");
    sub->add_option("--gap", opts.config.gap_tolerance_s,
                    "gap tolerance bridged inside bursts, seconds");
    sub->add_option("--window-len", opts.config.window_len,
                    "per-window threshold length in samples (0 = global)");
    sub->add_option("--bins", opts.config.histogram_bins, "background histogram bins");
    if (clustering) {
        sub->add_option("--k", opts.config.clusters, "impulsive cluster count");
        sub->add_option("--kmeans-iters", opts.config.max_kmeans_iters,
                        "max k-means iterations");
    }
}

void run_analyze(const AnalyzeOptions& opts) {
    Recording recording;
    check(evin_recording_load(opts.in_path.c_str(), opts.format.c_str(), opts.rate,
                              recording.out()),
          "loading recording");
    Analysis analysis;
    check(evin_analyze(recording.get(), &opts.config, analysis.out()), "analysis");

    double threshold = 0, w_rms = 0;
    uint64_t flagged = 0, bursts = 0, background = 0;
    double moments[6] = {0};
    check(evin_analysis_summary(analysis.get(), &threshold, &w_rms, &flagged, &bursts,
                                &background, moments),
          "analysis summary");
    std::printf("samples                           = %zu\n",
                evin_recording_size(recording.get()));
    std::printf("W_rms                             = %.6g\n", w_rms);
    std::printf("threshold (alpha = %g)            = %.6g\n", opts.config.alpha, threshold);
    std::printf("flagged samples                   = %" PRIu64 "\n", flagged);
    std::printf("burst events                      = %" PRIu64 "\n", bursts);
    std::printf("background samples                = %" PRIu64 "\n", background);
    print_moments(moments);

    const std::string stem = path_stem(opts.in_path);
    OwnedString csv;
    check(evin_analysis_bursts_csv(analysis.get(), csv.out()), "burst table");
    write_file(opts.bursts_path.empty() ? stem + ".bursts.csv" : opts.bursts_path, csv.get(),
               "bursts csv");
    check(evin_analysis_histogram_csv(analysis.get(), csv.out()), "histogram table");
    write_file(opts.hist_path.empty() ? stem + ".hist.csv" : opts.hist_path, csv.get(),
               "histogram csv");
}

void run_estimate(const AnalyzeOptions& opts, const std::string& report_path,
                  const std::string& profile_path, const std::string& hist_path) {
    Recording recording;
    check(evin_recording_load(opts.in_path.c_str(), opts.format.c_str(), opts.rate,
                              recording.out()),
          "loading recording");
    Report report;
    check(evin_estimate(recording.get(), &opts.config, report.out()), "estimation");

    const size_t states = evin_report_states(report.get());
    Profile profile;
    check(evin_report_profile(report.get(), profile.out()), "reading estimated profile");
    std::vector<double> p(states), sigma(states), d(states);
    double r = 0;
    check(evin_profile_get(profile.get(), p.data(), sigma.data(), &r), "reading profile");
    uint64_t burst_count = 0;
    double moments[6] = {0};
    check(evin_report_get(report.get(), d.data(), &burst_count, moments), "reading report");

    std::printf("states = %zu, burst events = %" PRIu64 "\n", states, burst_count);
    for (size_t m = 0; m < states; ++m)
        std::printf("state %zu: p = %.6g  sigma = %.6g  d = %.6g samples\n", m, p[m], sigma[m],
                    d[m]);
    std::printf("r = %.6g\n", r);
    print_moments(moments);

    const std::string stem = path_stem(opts.in_path);
    const std::string report_out = report_path.empty() ? stem + ".report.txt" : report_path;
    check(evin_report_save(report.get(), report_out.c_str()), "writing report");
    std::printf("report: %s\n", report_out.c_str());

    OwnedString csv;
    check(evin_report_bursts_csv(report.get(), csv.out()), "burst table");
    write_file(opts.bursts_path.empty() ? stem + ".bursts.csv" : opts.bursts_path, csv.get(),
               "bursts csv");
    if (!hist_path.empty()) {
        check(evin_report_histogram_csv(report.get(), csv.out()), "histogram table");
        write_file(hist_path, csv.get(), "histogram csv");
    }
    if (!profile_path.empty()) {
        check(evin_profile_save(profile.get(), profile_path.c_str()), "writing profile");
        std::printf("profile: %s\n", profile_path.c_str());
    }
}

struct SynthOptions {
    std::string profile_path;
    std::vector<double> middleton;  // A, Gamma, sigma2, M
    double r = 0.0;
    bool have_r = false;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "f32le";
    double rate = 2.6e6;
    std::string mode = "complex";
};

void load_or_build_profile(const std::string& profile_path,
                           const std::vector<double>& middleton, bool have_r, double r,
                           Profile& profile) {
    if (!profile_path.empty() && !middleton.empty())
        throw Fail{2, "give either --profile or --middleton, not both"};
    if (!profile_path.empty()) {
        check(evin_profile_load(profile_path.c_str(), profile.out()), "loading profile");
        return;
    }
    if (middleton.empty()) throw Fail{2, "one of --profile or --middleton is required"};
    if (!have_r) throw Fail{2, "--middleton needs --r for the correlation"};
    check(evin_profile_middleton(middleton[0], middleton[1], middleton[2],
                                 static_cast<int>(middleton[3]), r, profile.out()),
          "building canonical profile");
}

void run_synth(const SynthOptions& opts) {
    Profile profile;
    load_or_build_profile(opts.profile_path, opts.middleton, opts.have_r, opts.r, profile);
    if (opts.mode != "complex" && opts.mode != "real")
        throw Fail{2, "--mode must be 'complex' or 'real'"};
    Recording recording;
    check(evin_synthesize(profile.get(), opts.n, opts.seed, opts.mode == "complex" ? 1 : 0,
                          opts.rate, recording.out()),
          "synthesis");
    check(evin_recording_save(recording.get(), opts.out_path.c_str(), opts.format.c_str()),
          "writing output");
    std::printf("seed = %" PRIu64 "\n", opts.seed);
    std::printf("samples = %zu (%s, %s)\n", evin_recording_size(recording.get()),
                opts.mode.c_str(), opts.format.c_str());
    std::printf("out: %s\n", opts.out_path.c_str());
}

struct BerOptions {
    std::string profile_path;
    std::vector<double> middleton;
    double r = 0.0;
    bool have_r = false;
    std::string code_path;
    std::size_t code_n = 1024;
    std::vector<double> snr_grid;
    std::string convention = "total";
    std::string detector = "both";
    std::uint64_t seed = 1;
    std::size_t max_codewords = 20000;
    std::size_t target_errors = 100;
    int decoder_iters = 50;
    int threads = 0;
    std::string out_path;
    std::string plotdata_dir;
};

std::string run_ber_one(const evin_profile* profile, const evin_code* code,
                        const BerOptions& opts, const std::string& detector) {
    evin_ber_config config;
    evin_ber_config_init(&config);
    config.snr_grid_db = opts.snr_grid.data();
    config.snr_count = opts.snr_grid.size();
    config.convention = opts.convention.c_str();
    config.detector = detector.c_str();
    config.seed = opts.seed;
    config.max_codewords = opts.max_codewords;
    config.target_errors = opts.target_errors;
    config.max_decoder_iters = opts.decoder_iters;
    config.threads = opts.threads;

    std::vector<evin_ber_point> points(opts.snr_grid.size());
    check(evin_run_ber(profile, code, &config, points.data()),
          "ber sweep (" + detector + " detector)");
    for (const evin_ber_point& point : points) {
        std::printf("%s  snr %+7.2f dB  ber %.3e  (%" PRIu64 " errors / %" PRIu64
                    " bits, %" PRIu64 " codewords, convergence %.3f)%s\n",
                    detector.c_str(), point.snr_db, point.ber, point.bit_errors, point.bits,
                    point.codewords, point.convergence_rate,
                    point.low_confidence ? "  [low confidence: budget-capped]" : "");
        if (point.low_confidence)
            std::fprintf(stderr,
                         "warning: snr %g dB (%s): codeword budget reached with %" PRIu64
                         " errors, below the %zu target\n",
                         point.snr_db, detector.c_str(), point.bit_errors, opts.target_errors);
    }
    OwnedString csv;
    check(evin_ber_points_csv(points.data(), points.size(), opts.convention.c_str(),
                              detector.c_str(), opts.seed, csv.out()),
          "ber csv");
    return csv.get();
}

void emit_plotdata(const evin_profile* profile, const BerOptions& opts,
                   const std::string& ber_csv) {
    const std::string dir = opts.plotdata_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Fail{1, "creating plotdata directory '" + dir + "': " + ec.message()};
    // Diagnostic synthesis: enough samples for stable burst statistics.
    const std::size_t diag_n = 2000000;
    Recording recording;
    check(evin_synthesize(profile, diag_n, opts.seed, 1, 2.6e6, recording.out()),
          "plotdata synthesis");
    evin_analysis_config config;
    evin_analysis_config_init(&config);
    Analysis analysis;
    check(evin_analyze(recording.get(), &config, analysis.out()), "plotdata analysis");
    OwnedString csv;
    check(evin_analysis_histogram_csv(analysis.get(), csv.out()), "plotdata histogram");
    write_file(dir + "/background_hist.csv", csv.get(), "plotdata histogram csv");
    check(evin_analysis_bursts_csv(analysis.get(), csv.out()), "plotdata bursts");
    write_file(dir + "/bursts.csv", csv.get(), "plotdata bursts csv");

    Recording trace;
    const std::size_t trace_n = 26000;  // 10 ms at the default rate
    check(evin_synthesize(profile, trace_n, opts.seed, 1, 2.6e6, trace.out()),
          "plotdata trace synthesis");
    check(evin_recording_save(trace.get(), (dir + "/noise_trace.csv").c_str(), "csv"),
          "writing plotdata trace csv");
    std::printf("plotdata trace csv: %s/noise_trace.csv\n", dir.c_str());
    write_file(dir + "/ber.csv", ber_csv.c_str(), "plotdata ber csv");
}

void run_ber_cmd(const BerOptions& opts) {
    Profile profile;
    load_or_build_profile(opts.profile_path, opts.middleton, opts.have_r, opts.r, profile);
    Code code;
    if (!opts.code_path.empty())
        check(evin_code_load(opts.code_path.c_str(), code.out()), "loading code");
    else
        check(evin_code_generate(opts.code_n, code.out()), "generating code");
    std::printf("seed = %" PRIu64 "\n", opts.seed);
    std::printf("code: n = %zu, k = %zu\n", evin_code_n(code.get()), evin_code_k(code.get()));

    std::string csv;
    if (opts.detector == "both") {
        csv = run_ber_one(profile.get(), code.get(), opts, "bcjr");
        const std::string second = run_ber_one(profile.get(), code.get(), opts, "awgn");
        const std::size_t header_end = second.find('\n');
        csv += second.substr(header_end == std::string::npos ? second.size() : header_end + 1);
    } else if (opts.detector == "bcjr" || opts.detector == "awgn") {
        csv = run_ber_one(profile.get(), code.get(), opts, opts.detector);
    } else {
        throw Fail{2, "--detector must be 'bcjr', 'awgn', or 'both'"};
    }
    check(evin_write_text_file(opts.out_path.c_str(), csv.c_str()), "writing ber csv");
    std::printf("ber csv: %s\n", opts.out_path.c_str());
    if (!opts.plotdata_dir.empty()) emit_plotdata(profile.get(), opts, csv);
}

void run_code_gen(std::size_t n, const std::string& out_path) {
    Code code;
    check(evin_code_generate(n, code.out()), "generating code");
    check(evin_code_save(code.get(), out_path.c_str()), "writing alist");
    std::printf("code: n = %zu, k = %zu\n", evin_code_n(code.get()), evin_code_k(code.get()));
    std::printf("alist: %s\n", out_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bursty impulsive-interference modeling toolkit"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opts;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "threshold mask, burst segmentation, background diagnostics");
    add_analysis_flags(analyze, analyze_opts, false);
    analyze->add_option("--bursts", analyze_opts.bursts_path,
                        "burst table output (default <in>.bursts.csv)");
    analyze->add_option("--hist", analyze_opts.hist_path,
                        "background histogram output (default <in>.hist.csv)");
    analyze->callback([&] { run_analyze(analyze_opts); });

    AnalyzeOptions estimate_opts;
    std::string report_path, est_profile_path, est_hist_path;
    CLI::App* estimate =
        app.add_subcommand("estimate", "estimate a model profile from a recording");
    add_analysis_flags(estimate, estimate_opts, true);
    estimate->add_option("--report", report_path, "report output (default <in>.report.txt)");
    estimate->add_option("--bursts", estimate_opts.bursts_path,
                         "burst table output (default <in>.bursts.csv)");
    estimate->add_option("--profile", est_profile_path, "also save the profile alone");
    estimate->add_option("--hist", est_hist_path, "also save the background histogram");
    estimate->callback(
        [&] { run_estimate(estimate_opts, report_path, est_profile_path, est_hist_path); });

    SynthOptions synth_opts;
    CLI::App* synth = app.add_subcommand("synth", "synthesize model noise to an IQ file");
    synth->add_option("--profile", synth_opts.profile_path, "profile or report file");
    CLI::Option* synth_mid = synth->add_option("--middleton", synth_opts.middleton,
                                               "canonical parameters: A Gamma sigma2 M")
                                 ->expected(4);
    CLI::Option* synth_r =
        synth->add_option("--r", synth_opts.r, "correlation for --middleton profiles");
    synth->add_option("--n", synth_opts.n, "sample count")->required();
    synth->add_option("--seed", synth_opts.seed, "random seed (default 1)");
    synth->add_option("--out", synth_opts.out_path, "output path")->required();
    synth->add_option("--format", synth_opts.format, "f32le | s16le | csv (default f32le)");
    synth->add_option("--rate", synth_opts.rate, "sample rate in Hz (default 2.6e6)");
    synth->add_option("--mode", synth_opts.mode, "complex | real (default complex)");
    synth->callback([&] {
        synth_opts.have_r = synth_r->count() > 0;
        (void)synth_mid;
        run_synth(synth_opts);
    });

    BerOptions ber_opts;
    CLI::App* ber = app.add_subcommand("ber", "coded-BPSK Monte-Carlo BER sweep");
    ber->add_option("--profile", ber_opts.profile_path, "profile or report file");
    ber->add_option("--middleton", ber_opts.middleton, "canonical parameters: A Gamma sigma2 M")
        ->expected(4);
    CLI::Option* ber_r =
        ber->add_option("--r", ber_opts.r, "correlation for --middleton profiles");
    ber->add_option("--code", ber_opts.code_path, "alist code file (overrides --code-n)");
    ber->add_option("--code-n", ber_opts.code_n,
                    "generate a regular (3,6) code of this length (default 1024)");
    ber->add_option("--snr", ber_opts.snr_grid, "Eb/N0 grid in dB, comma separated")
        ->required()
        ->delimiter(',');
    ber->add_option("--convention", ber_opts.convention,
                    "SNR reference: total | background (default total)");
    ber->add_option("--detector", ber_opts.detector, "bcjr | awgn | both (default both)");
    ber->add_option("--seed", ber_opts.seed, "random seed (default 1)");
    ber->add_option("--max-codewords", ber_opts.max_codewords,
                    "per-point codeword budget (default 20000)");
    ber->add_option("--target-errors", ber_opts.target_errors,
                    "per-point early-stop error count (default 100)");
    ber->add_option("--decoder-iters", ber_opts.decoder_iters,
                    "max decoder iterations (default 50)");
    ber->add_option("--threads", ber_opts.threads,
                    "worker threads, 0 = all (never affects results)");
    ber->add_option("--out", ber_opts.out_path, "output CSV path")->required();
    ber->add_option("--plotdata", ber_opts.plotdata_dir,
                    "also emit plot-ready CSVs into this directory");
    ber->callback([&] {
        ber_opts.have_r = ber_r->count() > 0;
        run_ber_cmd(ber_opts);
    });

    std::size_t gen_n = 1024;
    std::string gen_out;
    CLI::App* code_gen =
        app.add_subcommand("code-gen", "generate a regular (3,6) LDPC code as alist");
    code_gen->add_option("--n", gen_n, "codeword length, even, >= 6 (default 1024)");
    code_gen->add_option("--out", gen_out, "alist output path")->required();
    code_gen->callback([&] { run_code_gen(gen_n, gen_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Fail& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return f.exit_code;
    }
    return 0;
}
