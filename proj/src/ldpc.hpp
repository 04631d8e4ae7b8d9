#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace evin {

// Systematic-encoder structure derived from the parity-check matrix by GF(2)
// elimination: information bits live at the free columns, parity bits at the
// pivot columns, and each pivot row lists the information indices it XORs.
struct EncoderSetup {
    std::vector<std::uint32_t> info_cols;
    std::vector<std::uint32_t> parity_cols;
    std::vector<std::vector<std::uint32_t>> parity_from_info;
};

// Built on first use (the elimination is quadratic in the check count, which
// is wasteful for large imported codes that are only ever decoded offline).
struct EncoderCache {
    std::once_flag once;
    std::optional<EncoderSetup> setup;
    Status error = Status::ok;
    std::string error_message;
};

struct LdpcCode {
    std::size_t n = 0;       // variable nodes / codeword length
    std::size_t checks = 0;  // check nodes / parity rows
    std::vector<std::vector<std::uint32_t>> check_adj;  // per check: variables
    std::vector<std::vector<std::uint32_t>> var_adj;    // per variable: checks

    std::shared_ptr<EncoderCache> cache = std::make_shared<EncoderCache>();

    std::size_t k() const { return n - checks; }
    std::size_t edge_count() const;
    void validate() const;
};

struct DecodeResult {
    std::vector<std::uint8_t> info_bits;  // hard decisions at information positions
    std::vector<std::uint8_t> codeword;   // hard decisions, all n positions
    bool converged = false;               // true iff the syndrome reached zero
    int iterations = 0;
};

// alist text interchange: tolerant of both zero-padded and unpadded neighbor
// lines; rejects inconsistent degrees or adjacency with a line number.
LdpcCode load_code(const std::string& path);
void save_code(const LdpcCode& code, const std::string& path);

// Deterministic regular (3,6) rate-1/2 construction: edges are placed one at
// a time onto the check farthest from the variable in the current graph
// (progressive edge growth), tie-broken by smallest degree then index.
LdpcCode make_regular_code(std::size_t n);

// Rank check + elimination happen here; throws encoding_setup if the matrix
// is rank-deficient. Thread-safe and cached across copies of the code.
const EncoderSetup& encoder_setup(const LdpcCode& code);

std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info, const LdpcCode& code);

// Log-domain sum-product with a flooding schedule and early exit on a zero
// syndrome. Non-convergence is reported through the flag, never an error.
DecodeResult decode(const std::vector<double>& llrs, const LdpcCode& code, int max_iters = 50);

}  // namespace evin
