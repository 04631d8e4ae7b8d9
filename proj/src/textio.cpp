#include "textio.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "error.hpp"

namespace evin {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_parse(const KeyValue& kv, const std::string& path, const char* what) {
    fail(Status::format_error, path + ":" + std::to_string(kv.line) + ": key '" + kv.key +
                                   "' " + what + " (got '" + kv.value + "')");
}

}  // namespace

std::vector<KeyValue> load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Status::io_error, "cannot open '" + path + "' for reading");
    std::vector<KeyValue> kvs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            fail(Status::format_error,
                 path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        KeyValue kv;
        kv.key = trim(text.substr(0, eq));
        kv.value = trim(text.substr(eq + 1));
        kv.line = line_no;
        if (kv.key.empty())
            fail(Status::format_error, path + ":" + std::to_string(line_no) + ": empty key");
        for (const KeyValue& seen : kvs)
            if (seen.key == kv.key)
                fail(Status::format_error, path + ":" + std::to_string(line_no) +
                                               ": duplicate key '" + kv.key + "'");
        kvs.push_back(std::move(kv));
    }
    return kvs;
}

const KeyValue& require_key(const std::vector<KeyValue>& kvs, const std::string& key,
                            const std::string& path) {
    if (const KeyValue* kv = find_key(kvs, key)) return *kv;
    fail(Status::format_error, path + ": missing required key '" + key + "'");
}

const KeyValue* find_key(const std::vector<KeyValue>& kvs, const std::string& key) {
    for (const KeyValue& kv : kvs)
        if (kv.key == key) return &kv;
    return nullptr;
}

double parse_double(const KeyValue& kv, const std::string& path) {
    const char* begin = kv.value.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE)
        fail_parse(kv, path, "is not a number");
    return value;
}

long long parse_int(const KeyValue& kv, const std::string& path) {
    const char* begin = kv.value.c_str();
    char* end = nullptr;
    errno = 0;
    const long long value = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE)
        fail_parse(kv, path, "is not an integer");
    return value;
}

std::vector<double> parse_double_vector(const KeyValue& kv, const std::string& path) {
    std::vector<double> values;
    const char* cursor = kv.value.c_str();
    while (*cursor != '\0') {
        while (*cursor == ' ' || *cursor == '\t') ++cursor;
        if (*cursor == '\0') break;
        char* end = nullptr;
        errno = 0;
        const double value = std::strtod(cursor, &end);
        if (end == cursor || errno == ERANGE) fail_parse(kv, path, "is not a number list");
        values.push_back(value);
        cursor = end;
    }
    if (values.empty()) fail_parse(kv, path, "is not a number list");
    return values;
}

std::string format_double(double value) {
    // %.17g always round-trips; prefer the shorter %.*g when it parses back
    // to the same bits so files stay human-readable.
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

std::string format_double_vector(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += format_double(values[i]);
    }
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Status::io_error, "cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            fail(Status::io_error, "failed writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        fail(Status::io_error, "failed moving '" + tmp + "' to '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Status::io_error, "cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    if (!in.good() && !in.eof()) fail(Status::io_error, "failed reading '" + path + "'");
    return out.str();
}

}  // namespace evin
