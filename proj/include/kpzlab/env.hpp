#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpzlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

#define KPZLAB_ERROR(Name, tag)                                        \
    struct Name : Error {                                              \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return tag; }     \
    }

KPZLAB_ERROR(OrderError, "order-violation");
KPZLAB_ERROR(GeometryError, "geometry");
KPZLAB_ERROR(CapExceeded, "cap-exceeded");
KPZLAB_ERROR(ConeError, "out-of-cone");
KPZLAB_ERROR(WindowOverflow, "window-overflow");
KPZLAB_ERROR(StabilizationFailed, "stabilization-failed");
KPZLAB_ERROR(RootNotFound, "root-not-found");
KPZLAB_ERROR(VerificationFailed, "verification-failed");
KPZLAB_ERROR(SeamViolation, "seam-violation");
KPZLAB_ERROR(SwitchNotFound, "switch-not-found");

#undef KPZLAB_ERROR

struct EnvironmentSpec {
    uint64_t seed = 0;
    double rate = 1.0;
    // Two-valued weights {1, 2}/rate: makes exact ties common. Only used to exhibit tie artifacts.
    bool degenerate = false;
};

struct LatticePoint {
    int64_t i = 0;
    int64_t j = 0;

    int64_t level() const { return i + j; }
    int64_t offset() const { return i - j; }
    static LatticePoint from_level(int64_t level, int64_t m) { return {(level + m) / 2, (level - m) / 2}; }
    bool operator==(const LatticePoint&) const = default;
};

inline bool dominated(const LatticePoint& p, const LatticePoint& q) { return p.i <= q.i && p.j <= q.j; }

struct LatticeRect {
    LatticePoint lo, hi;

    int64_t width() const { return hi.i - lo.i + 1; }
    int64_t height() const { return hi.j - lo.j + 1; }
    int64_t area() const { return width() * height(); }
    bool contains(const LatticePoint& p) const { return dominated(lo, p) && dominated(p, hi); }
};

// Maximum number of lattice cells any single dense allocation may hold.
int64_t memory_cap();
void set_memory_cap(int64_t cells);
void check_cap(int64_t cells, const char* what);

// Raw 64-bit hash word for vertex (i, j).
uint64_t vertex_hash(uint64_t seed, int64_t i, int64_t j);

// Exp(rate) weight, quantized to odd multiples of 2^-33 so that sums of up to
// ~10^6 weights are exact in double precision.
double weight(const EnvironmentSpec& env, const LatticePoint& p);

// Weights along an antidiagonal: out[r] = weight(i0 + r, j0 - r).
void weight_run(const EnvironmentSpec& env, int64_t i0, int64_t j0, int64_t count, double* out);

// Weights along a row: out[r] = weight(i0 + r, j).
void weight_row(const EnvironmentSpec& env, int64_t i0, int64_t j, int64_t count, double* out);

struct WeightBlock {
    LatticeRect rect;
    std::vector<double> values;  // row-major in j, then i

    double at(int64_t i, int64_t j) const { return values[(j - rect.lo.j) * rect.width() + (i - rect.lo.i)]; }
};

WeightBlock weight_block(const EnvironmentSpec& env, const LatticeRect& rect);

std::string to_json(const EnvironmentSpec& env);

}  // namespace kpzlab
