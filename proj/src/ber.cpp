#include "ber.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "detector.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "synth.hpp"
#include "textio.hpp"

namespace evin {

namespace {

struct TrialOutcome {
    std::uint32_t bit_errors = 0;
    std::uint8_t converged = 0;
};

// Stream layout under the root seed: stream(snr_index) -> stream(trial) ->
// {0: information bits, 1: noise synthesis root}. No draw depends on the
// detector choice, so matched seeds compare detectors on identical channels.
TrialOutcome run_trial(const ModelProfile& scaled, double awgn_var, const LdpcCode& code,
                       const BerConfig& config, std::size_t snr_index, std::size_t trial) {
    const CounterRng trial_rng = CounterRng(config.seed)
                                     .stream(static_cast<std::uint64_t>(snr_index))
                                     .stream(static_cast<std::uint64_t>(trial));
    const CounterRng bit_rng = trial_rng.stream(0);
    const std::size_t k = code.k();
    std::vector<std::uint8_t> info(k);
    for (std::size_t j = 0; j < k; ++j)
        info[j] = static_cast<std::uint8_t>(bit_rng.bits(j) >> 63);

    const std::vector<std::uint8_t> codeword = encode(info, code);
    const NoiseRealization noise =
        synthesize_noise(scaled, code.n, trial_rng.stream(1).key(), SynthMode::real);
    std::vector<double> received(code.n);
    for (std::size_t i = 0; i < code.n; ++i)
        received[i] = (codeword[i] ? -1.0 : 1.0) + noise.samples[i].real();

    const std::vector<double> llrs = config.detector == Detector::bcjr
                                         ? bcjr_llrs(received, scaled)
                                         : awgn_llrs(received, awgn_var);
    const DecodeResult decoded = decode(llrs, code, config.max_decoder_iters);

    TrialOutcome outcome;
    for (std::size_t j = 0; j < k; ++j) outcome.bit_errors += decoded.info_bits[j] != info[j];
    outcome.converged = decoded.converged ? 1 : 0;
    return outcome;
}

}  // namespace

Detector parse_detector(const std::string& name) {
    if (name == "bcjr") return Detector::bcjr;
    if (name == "awgn") return Detector::awgn;
    fail(Status::usage_error, "unknown detector '" + name + "' (expected 'bcjr' or 'awgn')");
}

SnrConvention parse_convention(const std::string& name) {
    if (name == "total") return SnrConvention::total_power;
    if (name == "background") return SnrConvention::background_power;
    fail(Status::usage_error,
         "unknown SNR convention '" + name + "' (expected 'total' or 'background')");
}

const char* detector_name(Detector detector) {
    return detector == Detector::bcjr ? "bcjr" : "awgn";
}

const char* convention_name(SnrConvention convention) {
    return convention == SnrConvention::total_power ? "total" : "background";
}

void BerConfig::validate() const {
    if (snr_grid_db.empty()) fail(Status::invalid_argument, "SNR grid must not be empty");
    for (double snr : snr_grid_db)
        if (!std::isfinite(snr)) fail(Status::invalid_argument, "SNR grid entries must be finite");
    if (max_codewords < 1) fail(Status::invalid_argument, "max codewords must be at least 1");
    if (target_errors < 1) fail(Status::invalid_argument, "target error count must be at least 1");
    if (max_decoder_iters < 1)
        fail(Status::invalid_argument, "max decoder iterations must be at least 1");
    if (threads < 0) fail(Status::invalid_argument, "thread count must be nonnegative");
}

ModelProfile scale_profile_to_snr(const ModelProfile& profile, double snr_db,
                                  SnrConvention convention, double code_rate) {
    profile.validate();
    if (!std::isfinite(snr_db)) fail(Status::invalid_argument, "SNR must be finite");
    if (!(code_rate > 0.0) || !(code_rate <= 1.0))
        fail(Status::invalid_argument, "code rate must be in (0, 1]");
    const double reference = convention == SnrConvention::total_power
                                 ? profile.mixture_power()
                                 : profile.sigma[0] * profile.sigma[0];
    const double target = 1.0 / (2.0 * code_rate * std::pow(10.0, snr_db / 10.0));
    const double scale = std::sqrt(target / reference);
    ModelProfile scaled = profile;
    for (double& s : scaled.sigma) s *= scale;
    return scaled;
}

std::vector<BerPoint> run_ber(const ModelProfile& profile, const LdpcCode& code,
                              const BerConfig& config) {
    profile.validate();
    config.validate();
    const EncoderSetup& setup = encoder_setup(code);  // fail fast, build once
    const double code_rate =
        static_cast<double>(setup.info_cols.size()) / static_cast<double>(code.n);
    const std::size_t num_threads =
        config.threads > 0 ? static_cast<std::size_t>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());

    std::vector<BerPoint> points;
    points.reserve(config.snr_grid_db.size());
    for (std::size_t snr_index = 0; snr_index < config.snr_grid_db.size(); ++snr_index) {
        const double snr_db = config.snr_grid_db[snr_index];
        const ModelProfile scaled =
            scale_profile_to_snr(profile, snr_db, config.convention, code_rate);
        const double awgn_var = scaled.sigma[0] * scaled.sigma[0];

        BerPoint point;
        point.snr_db = snr_db;
        std::size_t next_trial = 0;
        bool stopped = false;
        std::vector<TrialOutcome> chunk;
        const std::size_t chunk_size = std::max<std::size_t>(16, 4 * num_threads);
        while (!stopped && next_trial < config.max_codewords) {
            const std::size_t count = std::min(chunk_size, config.max_codewords - next_trial);
            chunk.assign(count, TrialOutcome{});
            if (num_threads == 1 || count == 1) {
                for (std::size_t t = 0; t < count; ++t)
                    chunk[t] = run_trial(scaled, awgn_var, code, config, snr_index,
                                         next_trial + t);
            } else {
                std::atomic<std::size_t> cursor{0};
                std::exception_ptr first_error;
                std::mutex error_mutex;
                auto worker = [&] {
                    for (;;) {
                        const std::size_t t = cursor.fetch_add(1);
                        if (t >= count) return;
                        try {
                            chunk[t] = run_trial(scaled, awgn_var, code, config, snr_index,
                                                 next_trial + t);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(error_mutex);
                            if (!first_error) first_error = std::current_exception();
                            return;
                        }
                    }
                };
                std::vector<std::thread> pool;
                for (std::size_t w = 0; w < std::min(num_threads, count); ++w)
                    pool.emplace_back(worker);
                for (std::thread& th : pool) th.join();
                if (first_error) std::rethrow_exception(first_error);
            }
            // Merge in trial order with the serial stopping rule; speculative
            // surplus trials are discarded, so chunking cannot change totals.
            for (std::size_t t = 0; t < count; ++t) {
                point.bit_errors += chunk[t].bit_errors;
                point.converged += chunk[t].converged;
                ++point.codewords;
                if (point.bit_errors >= config.target_errors) {
                    stopped = true;
                    break;
                }
            }
            next_trial += count;
        }
        point.bits = point.codewords * setup.info_cols.size();
        point.ber = static_cast<double>(point.bit_errors) / static_cast<double>(point.bits);
        point.convergence_rate =
            static_cast<double>(point.converged) / static_cast<double>(point.codewords);
        point.low_confidence = point.bit_errors < config.target_errors;
        points.push_back(point);
    }
    return points;
}

std::string ber_to_csv(const std::vector<BerPoint>& points, SnrConvention convention,
                       Detector detector, std::uint64_t seed) {
    std::string out = "snr_db,convention,detector,ber,bit_errors,bits,codewords,"
                      "convergence_rate,seed\n";
    for (const BerPoint& point : points) {
        out += format_double(point.snr_db);
        out += ',';
        out += convention_name(convention);
        out += ',';
        out += detector_name(detector);
        out += ',';
        out += format_double(point.ber);
        out += ',';
        out += std::to_string(point.bit_errors);
        out += ',';
        out += std::to_string(point.bits);
        out += ',';
        out += std::to_string(point.codewords);
        out += ',';
        out += format_double(point.convergence_rate);
        out += ',';
        out += std::to_string(seed);
        out += '\n';
    }
    return out;
}

}  // namespace evin
