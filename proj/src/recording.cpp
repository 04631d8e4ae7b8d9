#include "recording.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "error.hpp"
#include "textio.hpp"

namespace evin {

namespace {

// Portable little-endian scalar codecs; files are byte-exact regardless of
// host endianness.
void put_u16le(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_f32le(std::string& out, float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, sizeof bits);
    out.push_back(static_cast<char>(bits & 0xff));
    out.push_back(static_cast<char>((bits >> 8) & 0xff));
    out.push_back(static_cast<char>((bits >> 16) & 0xff));
    out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

std::uint16_t get_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

float get_f32le(const unsigned char* p) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    float value;
    std::memcpy(&value, &bits, sizeof value);
    return value;
}

std::int16_t quantize_s16(float value) {
    const float scaled = std::round(value * 32768.0f);
    const float clamped = std::min(32767.0f, std::max(-32768.0f, scaled));
    return static_cast<std::int16_t>(clamped);
}

IQRecording load_binary(const std::string& path, IqFormat format, double sample_rate_hz) {
    const std::string bytes = read_file(path);
    const std::size_t frame = format == IqFormat::f32le ? 8 : 4;
    if (bytes.size() % frame != 0)
        fail(Status::format_error,
             path + ": truncated " + iq_format_name(format) + " frame at byte offset " +
                 std::to_string(bytes.size() - bytes.size() % frame) + " (file size " +
                 std::to_string(bytes.size()) + ")");
    IQRecording rec;
    rec.sample_rate_hz = sample_rate_hz;
    rec.origin = path;
    rec.samples.reserve(bytes.size() / frame);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (format == IqFormat::f32le) {
        for (std::size_t off = 0; off < bytes.size(); off += 8)
            rec.samples.emplace_back(get_f32le(p + off), get_f32le(p + off + 4));
    } else {
        for (std::size_t off = 0; off < bytes.size(); off += 4) {
            const auto i = static_cast<std::int16_t>(get_u16le(p + off));
            const auto q = static_cast<std::int16_t>(get_u16le(p + off + 2));
            rec.samples.emplace_back(static_cast<float>(i) / 32768.0f,
                                     static_cast<float>(q) / 32768.0f);
        }
    }
    return rec;
}

IQRecording load_csv(const std::string& path, double sample_rate_hz) {
    std::ifstream in(path);
    if (!in) fail(Status::io_error, "cannot open '" + path + "' for reading");
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        fail(Status::format_error, path + ":1: empty file, expected header 'i,q'");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "i,q")
        fail(Status::format_error, path + ":1: expected header 'i,q', got '" + line + "'");
    IQRecording rec;
    rec.sample_rate_hz = sample_rate_hz;
    rec.origin = path;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* cursor = line.c_str();
        char* end = nullptr;
        errno = 0;
        const float i = std::strtof(cursor, &end);
        if (end == cursor || *end != ',' || errno == ERANGE)
            fail(Status::format_error,
                 path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
        cursor = end + 1;
        errno = 0;
        const float q = std::strtof(cursor, &end);
        if (end == cursor || *end != '\0' || errno == ERANGE)
            fail(Status::format_error,
                 path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
        rec.samples.emplace_back(i, q);
    }
    return rec;
}

}  // namespace

void IQRecording::validate() const {
    if (samples.empty()) fail(Status::invalid_argument, "recording has no samples");
    if (!(sample_rate_hz > 0.0))
        fail(Status::invalid_argument, "sample rate must be positive");
}

IqFormat parse_iq_format(const std::string& tag) {
    if (tag == "f32le") return IqFormat::f32le;
    if (tag == "s16le") return IqFormat::s16le;
    if (tag == "csv") return IqFormat::csv;
    fail(Status::usage_error, "unknown IQ format tag '" + tag + "' (expected f32le, s16le, or csv)");
}

const char* iq_format_name(IqFormat format) {
    switch (format) {
        case IqFormat::f32le: return "f32le";
        case IqFormat::s16le: return "s16le";
        case IqFormat::csv: return "csv";
    }
    return "?";
}

IQRecording load_iq(const std::string& path, IqFormat format, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0))
        fail(Status::invalid_argument, "sample rate must be positive");
    IQRecording rec = format == IqFormat::csv ? load_csv(path, sample_rate_hz)
                                              : load_binary(path, format, sample_rate_hz);
    rec.validate();
    return rec;
}

void write_iq(const IQRecording& recording, const std::string& path, IqFormat format) {
    recording.validate();
    std::string out;
    switch (format) {
        case IqFormat::f32le:
            out.reserve(recording.samples.size() * 8);
            for (const auto& z : recording.samples) {
                put_f32le(out, z.real());
                put_f32le(out, z.imag());
            }
            break;
        case IqFormat::s16le:
            out.reserve(recording.samples.size() * 4);
            for (const auto& z : recording.samples) {
                put_u16le(out, static_cast<std::uint16_t>(quantize_s16(z.real())));
                put_u16le(out, static_cast<std::uint16_t>(quantize_s16(z.imag())));
            }
            break;
        case IqFormat::csv: {
            out += "i,q\n";
            char buf[80];
            for (const auto& z : recording.samples) {
                // %.9g round-trips float32 exactly.
                std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", static_cast<double>(z.real()),
                              static_cast<double>(z.imag()));
                out += buf;
            }
            break;
        }
    }
    atomic_write_file(path, out);
}

std::vector<Window> window_iter(std::size_t n, std::size_t window_len, std::size_t hop) {
    if (n == 0) fail(Status::invalid_argument, "cannot window an empty recording");
    if (window_len < 1 || hop < 1)
        fail(Status::invalid_argument, "window length and hop must be at least 1");
    std::vector<Window> windows;
    if (window_len >= n) {
        windows.push_back({0, n, window_len > n});
        return windows;
    }
    for (std::size_t start = 0; start < n; start += hop) {
        const std::size_t end = std::min(start + window_len, n);
        windows.push_back({start, end - start, start + window_len > n});
    }
    return windows;
}

}  // namespace evin
