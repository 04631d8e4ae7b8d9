#pragma once

#include <stdexcept>
#include <string>

namespace evin {

// Status values mirror the public C API codes one-to-one so errors can cross
// the library boundary without translation tables.
enum class Status : int {
    ok = 0,
    invalid_argument = 1,     // bad parameter values, out-of-range inputs
    io_error = 2,             // unreadable/unwritable paths
    format_error = 3,         // malformed file contents
    usage_error = 4,          // unknown tags, inconsistent options
    insufficient_data = 5,    // not enough samples/bursts to estimate
    inconsistent_measurement = 6,  // estimates outside the model's domain
    numeric_error = 7,        // iteration failed to converge
    degenerate_data = 8,      // fewer distinct values than clusters
    encoding_setup = 9,       // rank-deficient parity-check matrix
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}

    Status status() const noexcept { return status_; }

private:
    Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
    throw Error(status, message);
}

}  // namespace evin
