#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kpzlab/busemann.hpp"

namespace kpzlab {

inline constexpr const char* kVersion = "0.4.0";

using json = nlohmann::ordered_json;

struct ConfigError : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

// Plain-text key = value settings grouped in [sections]; '#' and ';' start comments.
class Config {
public:
    static Config defaults();
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    int64_t get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, const std::string& value);
    // Values in `other` override these.
    void merge(const Config& other);

    Tolerances tolerances() const;
    json to_json() const;
    std::string to_text() const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const { return sections_; }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

json to_json(const Tolerances& tol);

struct RunManifest {
    std::string version = kVersion;
    EnvironmentSpec env;
    int64_t n = 0;
    std::string operation;
    json params = json::object();
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;

    json to_json() const;
    static RunManifest from_json(const json& j);
    void write(const std::filesystem::path& path) const;
    static RunManifest read(const std::filesystem::path& path);
};

std::string sha256_hex(const void* data, size_t size);
std::string sha256_hex(const std::string& s);

// Content-addressed store of double arrays: <key>.bin plus a <key>.json sidecar
// holding the descriptor and the blob checksum.
class Cache {
public:
    Cache() = default;
    Cache(std::filesystem::path dir, bool enabled = true);

    bool enabled() const { return enabled_; }
    const std::filesystem::path& dir() const { return dir_; }
    static std::string key(const json& descriptor);

    std::optional<std::vector<double>> load(const json& descriptor);
    void store(const json& descriptor, const std::vector<double>& values);
    std::vector<double> get_or_compute(const json& descriptor, const std::function<std::vector<double>()>& compute);

    int64_t hits = 0, misses = 0, corrupt = 0;
    std::vector<std::string> warnings;

private:
    std::filesystem::path dir_;
    bool enabled_ = false;
    std::mutex mu_;
};

// Far field values through the cache; fields that need moves bypass it.
FarField cached_far_field(Cache* cache, const EnvironmentSpec& env, const ScalingParams& params, double xi,
                          double depth, const FieldLayout& layout);

// A far-field source for the Busemann functions backed by the cache; empty without one.
FarFieldSource cache_source(Cache* cache, const EnvironmentSpec& env, const ScalingParams& params);

// Runs body(i) for i in [0, count) on up to `threads` workers; results are
// written by index, so the outcome does not depend on scheduling.
void parallel_for(size_t count, int threads, const std::function<void(size_t)>& body);

template <class T>
std::vector<T> parallel_map(size_t count, int threads, const std::function<T(size_t)>& f) {
    std::vector<T> out(count);
    parallel_for(count, threads, [&](size_t i) { out[i] = f(i); });
    return out;
}

void log_warning(const std::string& msg);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace kpzlab
