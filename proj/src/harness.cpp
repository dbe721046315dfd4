#include "kpzlab/harness.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kpzlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::defaults() {
    Config c;
    c.set("run", "seed", "1");
    c.set("run", "n", "500");
    c.set("run", "threads", "1");
    c.set("run", "deterministic", "false");
    const json tol = kpzlab::to_json(Tolerances{});
    for (const auto& [k, v] : tol.items()) {
        std::ostringstream os;
        os << v.get<double>();
        c.set("tolerances", k, os.str());
    }
    c.set("cache", "enabled", "true");
    c.set("cache", "dir", ".kpzlab-cache");
    return c;
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    std::istringstream in(text);
    std::string line, section = "run";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        c.set(section, key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError("missing config key [" + section + "] " + key);
    return sections_.at(section).at(key);
}

std::string Config::get(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? sections_.at(section).at(key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": not a number: " + v);
    }
}

int64_t Config::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t used = 0;
        long long d = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": not an integer: " + v);
    }
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("[" + section + "] " + key + ": not a boolean: " + v);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

void Config::merge(const Config& other) {
    for (const auto& [s, kv] : other.sections_)
        for (const auto& [k, v] : kv) set(s, k, v);
}

Tolerances Config::tolerances() const {
    Tolerances t;
    const std::map<std::string, double*> slots{{"stab", &t.stab},         {"mono", &t.mono},   {"d_sign", &t.d_sign},
                                               {"mv", &t.mv},             {"split", &t.split}, {"evol", &t.evol},
                                               {"composition", &t.composition}, {"cluster", &t.cluster}};
    auto it = sections_.find("tolerances");
    if (it == sections_.end()) return t;
    for (const auto& [k, v] : it->second) {
        auto slot = slots.find(k);
        if (slot == slots.end()) throw ConfigError("unknown tolerance " + k);
        *slot->second = get_double("tolerances", k);
    }
    return t;
}

json Config::to_json() const {
    json j = json::object();
    for (const auto& [s, kv] : sections_) {
        json sec = json::object();
        for (const auto& [k, v] : kv) sec[k] = v;
        j[s] = sec;
    }
    return j;
}

std::string Config::to_text() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, kv] : sections_) {
        if (!first) os << '\n';
        first = false;
        os << '[' << s << "]\n";
        for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
    }
    return os.str();
}

json to_json(const Tolerances& t) {
    return json{{"stab", t.stab}, {"mono", t.mono},   {"d_sign", t.d_sign},           {"mv", t.mv},
                {"split", t.split}, {"evol", t.evol}, {"composition", t.composition}, {"cluster", t.cluster}};
}

json RunManifest::to_json() const {
    json e{{"seed", env.seed}, {"rate", env.rate}, {"degenerate", env.degenerate}};
    return json{{"version", version},     {"env", e},         {"scaling", {{"n", n}}},
                {"operation", operation}, {"params", params}, {"outputs", outputs},
                {"wall_seconds", wall_seconds}};
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    try {
        m.version = j.at("version").get<std::string>();
        m.env.seed = j.at("env").at("seed").get<uint64_t>();
        m.env.rate = j.at("env").at("rate").get<double>();
        m.env.degenerate = j.at("env").value("degenerate", false);
        m.n = j.at("scaling").at("n").get<int64_t>();
        m.operation = j.at("operation").get<std::string>();
        m.params = j.at("params");
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.wall_seconds = j.value("wall_seconds", 0.0);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

void RunManifest::write(const std::filesystem::path& path) const { write_file(path, to_json().dump(2) + "\n"); }

RunManifest RunManifest::read(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("manifest " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

std::string sha256_hex(const void* data, size_t size) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += digits[md[i] >> 4];
        out += digits[md[i] & 15];
    }
    return out;
}

std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

Cache::Cache(std::filesystem::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {
    if (enabled_) std::filesystem::create_directories(dir_);
}

std::string Cache::key(const json& descriptor) { return sha256_hex(descriptor.dump()); }

std::optional<std::vector<double>> Cache::load(const json& descriptor) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!enabled_) {
        ++misses;
        return std::nullopt;
    }
    const std::string k = key(descriptor);
    const auto bin = dir_ / (k + ".bin"), side = dir_ / (k + ".json");
    if (!std::filesystem::exists(bin) || !std::filesystem::exists(side)) {
        ++misses;
        return std::nullopt;
    }
    std::string blob;
    json meta;
    try {
        blob = read_file(bin);
        meta = json::parse(read_file(side));
    } catch (const std::exception&) {
        meta = json::object();
    }
    if (!meta.contains("sha256") || meta["sha256"] != sha256_hex(blob) || blob.size() % sizeof(double) != 0 ||
        meta.value("descriptor", json()) != descriptor) {
        ++corrupt;
        ++misses;
        const std::string msg = "cache entry " + k + " failed verification; recomputing";
        warnings.push_back(msg);
        log_warning(msg);
        return std::nullopt;
    }
    std::vector<double> v(blob.size() / sizeof(double));
    std::memcpy(v.data(), blob.data(), blob.size());
    ++hits;
    return v;
}

void Cache::store(const json& descriptor, const std::vector<double>& values) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!enabled_) return;
    const std::string k = key(descriptor);
    std::string blob(values.size() * sizeof(double), '\0');
    std::memcpy(blob.data(), values.data(), blob.size());
    write_file(dir_ / (k + ".bin"), blob);
    json meta{{"descriptor", descriptor}, {"sha256", sha256_hex(blob)}, {"count", values.size()},
              {"version", kVersion}};
    write_file(dir_ / (k + ".json"), meta.dump(2) + "\n");
}

std::vector<double> Cache::get_or_compute(const json& descriptor,
                                          const std::function<std::vector<double>()>& compute) {
    if (auto v = load(descriptor)) return *v;
    auto v = compute();
    store(descriptor, v);
    return v;
}

FarField cached_far_field(Cache* cache, const EnvironmentSpec& env, const ScalingParams& params, double xi,
                          double depth, const FieldLayout& layout) {
    if (!cache || !cache->enabled() || layout.moves_from) return far_field(env, params, xi, depth, layout);
    const LatticePoint v = direction_ray(params, xi, depth);
    json rect = json::array();
    for (const auto& w : layout.windows) rect.push_back({w.level, w.m_lo, w.m_hi});
    const json desc{{"kind", "far_field"}, {"seed", env.seed}, {"rate", env.rate}, {"degenerate", env.degenerate},
                    {"n", params.n},       {"far_point", {v.i, v.j}}, {"rect", rect}};
    FarField f;
    f.xi = xi;
    f.depth = depth;
    f.v = v;
    // Blob: slice count, then (level, m_lo, size, values...) per slice.
    auto blob = cache->get_or_compute(desc, [&] {
        FarField g = far_field(env, params, xi, depth, layout);
        std::vector<double> out{double(g.slices.size())};
        for (const auto& s : g.slices) {
            out.push_back(double(s.level));
            out.push_back(double(s.m_lo));
            out.push_back(double(s.size()));
            out.insert(out.end(), s.value.begin(), s.value.end());
        }
        return out;
    });
    size_t p = 0;
    const size_t count = size_t(blob.at(p++));
    for (size_t k = 0; k < count; ++k) {
        Slice s;
        s.level = int64_t(blob.at(p++));
        s.m_lo = int64_t(blob.at(p++));
        const size_t len = size_t(blob.at(p++));
        s.value.assign(blob.begin() + long(p), blob.begin() + long(p + len));
        p += len;
        f.slices.push_back(std::move(s));
    }
    return f;
}

FarFieldSource cache_source(Cache* cache, const EnvironmentSpec& env, const ScalingParams& params) {
    if (!cache || !cache->enabled()) return {};
    return [cache, env, params](double xi, double depth, const FieldLayout& layout) {
        return cached_far_field(cache, env, params, xi, depth, layout);
    };
}

void parallel_for(size_t count, int threads, const std::function<void(size_t)>& body) {
    const size_t workers = std::min<size_t>(count, size_t(std::max(1, threads)));
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i; !failed && (i = next++) < count;) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void log_warning(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

}  // namespace kpzlab
