#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace evin {

constexpr double kDefaultSampleRateHz = 2.6e6;

// Baseband IQ capture: complex samples plus the sample rate they were taken
// at. Samples are stored as float32 pairs, the recorder's native precision.
struct IQRecording {
    std::vector<std::complex<float>> samples;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::string origin;

    std::size_t size() const { return samples.size(); }
    void validate() const;
};

enum class IqFormat {
    f32le,  // interleaved little-endian IEEE-754 binary32 [I0,Q0,I1,Q1,...]
    s16le,  // interleaved little-endian int16, amplitude scale 1/32768
    csv,    // text with header "i,q" and one decimal pair per row
};

// Parses a format tag ("f32le" | "s16le" | "csv"); unknown tag is a usage
// error. Formats are never sniffed from file contents.
IqFormat parse_iq_format(const std::string& tag);
const char* iq_format_name(IqFormat format);

IQRecording load_iq(const std::string& path, IqFormat format, double sample_rate_hz);
void write_iq(const IQRecording& recording, const std::string& path, IqFormat format);

// Half-open sample window [offset, offset+length); partial means the window
// was cut short by the end of the recording.
struct Window {
    std::size_t offset = 0;
    std::size_t length = 0;
    bool partial = false;
};

// Deterministic window schedule: windows start at every multiple of hop
// below n and are clipped to the recording end (final partial window
// included); a window length >= n yields exactly one window covering
// everything.
std::vector<Window> window_iter(std::size_t n, std::size_t window_len, std::size_t hop);

}  // namespace evin
