#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "error.hpp"
#include "recording.hpp"
#include "textio.hpp"

using namespace evin;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("evin-rec-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

IQRecording make_recording(std::vector<std::complex<float>> samples) {
    IQRecording rec;
    rec.samples = std::move(samples);
    rec.sample_rate_hz = kDefaultSampleRateHz;
    return rec;
}

}  // namespace

TEST_CASE("format tags parse and unknown tags are usage errors") {
    CHECK(parse_iq_format("f32le") == IqFormat::f32le);
    CHECK(parse_iq_format("s16le") == IqFormat::s16le);
    CHECK(parse_iq_format("csv") == IqFormat::csv);
    CHECK(iq_format_name(IqFormat::s16le) == std::string("s16le"));
    try {
        parse_iq_format("wav");
        FAIL("expected a usage error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::usage_error);
    }
}

TEST_CASE("single float32 frame decodes to one complex sample") {
    TempDir dir;
    const std::string path = dir.file("one.f32le");
    write_iq(make_recording({{1.0f, -1.0f}}), path, IqFormat::f32le);
    CHECK(fs::file_size(path) == 8);
    const IQRecording rec = load_iq(path, IqFormat::f32le, 2.6e6);
    REQUIRE(rec.size() == 1);
    CHECK(rec.samples[0] == std::complex<float>(1.0f, -1.0f));
    CHECK(rec.sample_rate_hz == 2.6e6);
}

TEST_CASE("int16 scaling convention maps 16384 to one half") {
    TempDir dir;
    const std::string path = dir.file("one.s16le");
    // 16384, 0 encoded little-endian by hand.
    atomic_write_file(path, std::string("\x00\x40\x00\x00", 4));
    const IQRecording rec = load_iq(path, IqFormat::s16le, 2.6e6);
    REQUIRE(rec.size() == 1);
    CHECK(rec.samples[0] == std::complex<float>(0.5f, 0.0f));
}

TEST_CASE("binary formats round-trip bit-exactly") {
    TempDir dir;
    std::vector<std::complex<float>> samples;
    for (int i = 0; i < 257; ++i)
        samples.emplace_back(0.001f * static_cast<float>(i * i) - 20.0f,
                             -1.0f / (1.0f + static_cast<float>(i)));

    const std::string f32 = dir.file("rt.f32le");
    write_iq(make_recording(samples), f32, IqFormat::f32le);
    CHECK(load_iq(f32, IqFormat::f32le, 1e6).samples == samples);

    // CSV keeps full float32 precision through %.9g.
    const std::string csv = dir.file("rt.csv");
    write_iq(make_recording(samples), csv, IqFormat::csv);
    CHECK(load_iq(csv, IqFormat::csv, 1e6).samples == samples);

    // s16le round-trips exactly for values already on the int16 grid.
    const std::vector<int> levels = {-32768, -16384, -1, 0, 1, 2047, 32767};
    std::vector<std::complex<float>> grid;
    for (std::size_t i = 0; i < levels.size(); ++i)
        grid.emplace_back(static_cast<float>(levels[i]) / 32768.0f,
                          static_cast<float>(levels[levels.size() - 1 - i]) / 32768.0f);
    const std::string s16 = dir.file("rt.s16le");
    write_iq(make_recording(grid), s16, IqFormat::s16le);
    CHECK(load_iq(s16, IqFormat::s16le, 1e6).samples == grid);
}

TEST_CASE("int16 writes round and clamp out-of-range amplitudes") {
    TempDir dir;
    const std::string path = dir.file("clamp.s16le");
    write_iq(make_recording({{1.5f, -2.0f}, {0.25001f, -0.25001f}}), path, IqFormat::s16le);
    const IQRecording rec = load_iq(path, IqFormat::s16le, 1e6);
    CHECK(rec.samples[0].real() == doctest::Approx(32767.0f / 32768.0f));
    CHECK(rec.samples[0].imag() == doctest::Approx(-1.0f));
    CHECK(rec.samples[1].real() == doctest::Approx(std::round(0.25001f * 32768.0f) / 32768.0f));
}

TEST_CASE("truncated binary frames are format errors with a byte offset") {
    TempDir dir;
    const std::string path = dir.file("trunc.f32le");
    atomic_write_file(path, std::string(13, '\x01'));  // not a multiple of 8
    try {
        load_iq(path, IqFormat::f32le, 1e6);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::format_error);
        CHECK(std::string(e.what()).find("byte offset 8") != std::string::npos);
    }

    atomic_write_file(path, std::string(6, '\x01'));  // not a multiple of 4
    try {
        load_iq(path, IqFormat::s16le, 1e6);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::format_error);
    }
}

TEST_CASE("csv ingestion validates header and rows") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");

    atomic_write_file(path, "q,i\n0.0,0.0\n");
    try {
        load_iq(path, IqFormat::csv, 1e6);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::format_error);
        CHECK(std::string(e.what()).find(":1") != std::string::npos);
    }

    atomic_write_file(path, "i,q\n0.5,0.5\n0.5;0.5\n");
    try {
        load_iq(path, IqFormat::csv, 1e6);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::format_error);
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }

    // Windows line endings are tolerated.
    atomic_write_file(path, "i,q\r\n1.0,-1.0\r\n");
    const IQRecording rec = load_iq(path, IqFormat::csv, 1e6);
    REQUIRE(rec.size() == 1);
    CHECK(rec.samples[0] == std::complex<float>(1.0f, -1.0f));
}

TEST_CASE("empty recordings and bad rates are rejected") {
    TempDir dir;
    const std::string path = dir.file("empty.f32le");
    atomic_write_file(path, "");
    CHECK_THROWS_AS(load_iq(path, IqFormat::f32le, 1e6), Error);
    CHECK_THROWS_AS(load_iq(path, IqFormat::f32le, 0.0), Error);
    IQRecording empty;
    CHECK_THROWS_AS(write_iq(empty, dir.file("x.f32le"), IqFormat::f32le), Error);
}

TEST_CASE("window schedule covers the recording deterministically") {
    // Non-overlapping with a final partial window.
    auto w = window_iter(10, 4, 4);
    REQUIRE(w.size() == 3);
    CHECK((w[0].offset == 0 && w[0].length == 4 && !w[0].partial));
    CHECK((w[1].offset == 4 && w[1].length == 4 && !w[1].partial));
    CHECK((w[2].offset == 8 && w[2].length == 2 && w[2].partial));

    // Window longer than the recording: one full-coverage window.
    w = window_iter(10, 64, 64);
    REQUIRE(w.size() == 1);
    CHECK((w[0].offset == 0 && w[0].length == 10 && w[0].partial));

    // Exact fit is not partial.
    w = window_iter(8, 8, 8);
    REQUIRE(w.size() == 1);
    CHECK(!w[0].partial);

    // Overlapping hop < window.
    w = window_iter(10, 4, 2);
    REQUIRE(w.size() == 5);
    CHECK((w[3].offset == 6 && w[3].length == 4 && !w[3].partial));
    CHECK((w[4].offset == 8 && w[4].length == 2 && w[4].partial));

    // Gapped hop > window.
    w = window_iter(10, 2, 5);
    REQUIRE(w.size() == 2);
    CHECK((w[1].offset == 5 && w[1].length == 2 && !w[1].partial));

    CHECK_THROWS_AS(window_iter(0, 4, 4), Error);
    CHECK_THROWS_AS(window_iter(10, 0, 4), Error);
    CHECK_THROWS_AS(window_iter(10, 4, 0), Error);
}
