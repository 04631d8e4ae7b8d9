#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace evin {

// One `key = value` line of a flat text file; value keeps its raw text so
// loaders can parse scalars or vectors as needed.
struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

// Parses a flat key-value file: blank lines and `#` comments ignored,
// everything else must be `key = value`. Duplicate keys are format errors.
std::vector<KeyValue> load_key_values(const std::string& path);

// Lookup helpers; fail with a format error naming the key when absent.
const KeyValue& require_key(const std::vector<KeyValue>& kvs, const std::string& key,
                            const std::string& path);
const KeyValue* find_key(const std::vector<KeyValue>& kvs, const std::string& key);

double parse_double(const KeyValue& kv, const std::string& path);
long long parse_int(const KeyValue& kv, const std::string& path);
std::vector<double> parse_double_vector(const KeyValue& kv, const std::string& path);

// Shortest decimal text that round-trips the exact double value.
std::string format_double(double value);
std::string format_double_vector(const std::vector<double>& values);

// Writes content to path via a temp file + rename so a failed write never
// leaves a partial file behind.
void atomic_write_file(const std::string& path, const std::string& content);

// Whole-file read; I/O error on failure.
std::string read_file(const std::string& path);

}  // namespace evin
