#include "kpzlab/env.hpp"

#include <atomic>
#include <cmath>
#include <cstring>

#include <json.hpp>

namespace kpzlab {

namespace {

constexpr uint64_t kRowKey = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kColKey = 0xC2B2AE3D27D4EB4FULL;

std::atomic<int64_t> g_cap{int64_t(1) << 31};

inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t hash_ij(uint64_t key, int64_t i, int64_t j) {
    uint64_t hi = mix64(key ^ (uint64_t(i) * kRowKey));
    return mix64(hi ^ (uint64_t(j) * kColKey));
}

// -ln(u) with u = ((h >> 11) + 1/2) 2^-53, branch-free so the loops vectorize.
inline double neg_log_u(uint64_t h) {
    double x = (double(int64_t(h >> 11)) + 0.5) * 0x1.0p-53;
    uint64_t b;
    std::memcpy(&b, &x, 8);
    int64_t k = int64_t(b - 0x3fe6a09e667f3bcdULL) >> 52;
    uint64_t mb = b - (uint64_t(k) << 52);
    double m;
    std::memcpy(&m, &mb, 8);
    double dk = double(k);
    double f = m - 1.0;
    double s = f / (2.0 + f);
    double z = s * s;
    double w = z * z;
    constexpr double Lg1 = 6.666666666666735130e-01, Lg2 = 3.999999999940941908e-01,
                     Lg3 = 2.857142874366239149e-01, Lg4 = 2.222219843214978396e-01,
                     Lg5 = 1.818357216161805012e-01, Lg6 = 1.531383769920937332e-01,
                     Lg7 = 1.479819860511658591e-01;
    double t1 = w * (Lg2 + w * (Lg4 + w * Lg6));
    double t2 = z * (Lg1 + w * (Lg3 + w * (Lg5 + w * Lg7)));
    double R = t2 + t1;
    double hfsq = 0.5 * f * f;
    constexpr double ln2_hi = 6.93147180369123816490e-01, ln2_lo = 1.90821492927058770002e-10;
    return -(dk * ln2_hi - ((hfsq - (s * (hfsq + R) + dk * ln2_lo)) - f));
}

// e >= 0, so truncation is floor.
inline double quantize(double e) { return (double(int64_t(e * 0x1.0p32)) + 0.5) * 0x1.0p-32; }

inline double weight_of(uint64_t key, double rate, int64_t i, int64_t j) {
    return quantize(neg_log_u(hash_ij(key, i, j)) / rate);
}

inline double coarse_weight(uint64_t key, double rate, int64_t i, int64_t j) {
    return quantize(double(1 + (hash_ij(key, i, j) >> 63)) / rate);
}

}  // namespace

int64_t memory_cap() { return g_cap.load(); }
void set_memory_cap(int64_t cells) { g_cap.store(cells); }

void check_cap(int64_t cells, const char* what) {
    if (cells > memory_cap())
        throw CapExceeded(std::string(what) + ": " + std::to_string(cells) + " cells exceeds cap " +
                          std::to_string(memory_cap()));
}

uint64_t vertex_hash(uint64_t seed, int64_t i, int64_t j) { return hash_ij(mix64(seed), i, j); }

double weight(const EnvironmentSpec& env, const LatticePoint& p) {
    if (env.degenerate) return coarse_weight(mix64(env.seed), env.rate, p.i, p.j);
    return weight_of(mix64(env.seed), env.rate, p.i, p.j);
}

void weight_run(const EnvironmentSpec& env, int64_t i0, int64_t j0, int64_t count, double* out) {
    const uint64_t key = mix64(env.seed);
    const double rate = env.rate;
    if (env.degenerate) {
        for (int64_t r = 0; r < count; ++r) out[r] = coarse_weight(key, rate, i0 + r, j0 - r);
        return;
    }
    for (int64_t r = 0; r < count; ++r) out[r] = weight_of(key, rate, i0 + r, j0 - r);
}

void weight_row(const EnvironmentSpec& env, int64_t i0, int64_t j, int64_t count, double* out) {
    const uint64_t key = mix64(env.seed);
    const double rate = env.rate;
    if (env.degenerate) {
        for (int64_t r = 0; r < count; ++r) out[r] = coarse_weight(key, rate, i0 + r, j);
        return;
    }
    for (int64_t r = 0; r < count; ++r) out[r] = weight_of(key, rate, i0 + r, j);
}

WeightBlock weight_block(const EnvironmentSpec& env, const LatticeRect& rect) {
    if (rect.width() <= 0 || rect.height() <= 0) throw GeometryError("weight_block: empty rect");
    check_cap(rect.area(), "weight_block");
    WeightBlock b{rect, std::vector<double>(size_t(rect.area()))};
    for (int64_t j = rect.lo.j; j <= rect.hi.j; ++j)
        weight_row(env, rect.lo.i, j, rect.width(), b.values.data() + (j - rect.lo.j) * rect.width());
    return b;
}

std::string to_json(const EnvironmentSpec& env) {
    nlohmann::json j{{"seed", env.seed}, {"rate", env.rate}};
    if (env.degenerate) j["degenerate"] = true;
    return j.dump();
}

}  // namespace kpzlab
