#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpc.hpp"
#include "model.hpp"

namespace evin {

enum class Detector { bcjr, awgn };
enum class SnrConvention { total_power, background_power };

Detector parse_detector(const std::string& name);         // "bcjr" | "awgn"
SnrConvention parse_convention(const std::string& name);  // "total" | "background"
const char* detector_name(Detector detector);
const char* convention_name(SnrConvention convention);

struct BerConfig {
    std::vector<double> snr_grid_db;
    SnrConvention convention = SnrConvention::total_power;
    Detector detector = Detector::bcjr;
    std::uint64_t seed = 1;
    std::size_t max_codewords = 20000;
    std::size_t target_errors = 100;
    int max_decoder_iters = 50;
    int threads = 0;  // 0 = all hardware threads; the count never affects results

    void validate() const;
};

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t codewords = 0;
    std::uint64_t converged = 0;
    double ber = 0.0;
    double convergence_rate = 0.0;
    bool low_confidence = false;  // stopped by the codeword budget, not the error target
};

// Uniformly scales sigma so the convention's reference power (total mixture
// power, or background sigma_0^2) meets Eb/N0 = snr_db for unit-energy BPSK
// at the given code rate: sigma_ref^2 = 1 / (2 R 10^(snr/10)). Preserves all
// sigma_m ratios and r.
ModelProfile scale_profile_to_snr(const ModelProfile& profile, double snr_db,
                                  SnrConvention convention, double code_rate);

// Monte-Carlo BER sweep: information bits -> systematic LDPC encode -> BPSK
// (bit 0 -> +1) -> additive synthesized noise -> detector -> decode -> info
// bit accounting. Each (snr index, trial) pair owns an independent seed
// stream, and trials are merged in index order with the serial stopping
// rule, so serial and parallel runs return identical points.
std::vector<BerPoint> run_ber(const ModelProfile& profile, const LdpcCode& code,
                              const BerConfig& config);

std::string ber_to_csv(const std::vector<BerPoint>& points, SnrConvention convention,
                       Detector detector, std::uint64_t seed);

}  // namespace evin
