#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpzlab/busemann.hpp"

namespace kpzlab {

struct EternalApprox;

// A finite proxy of a semi-infinite geodesic, stored downward from its root.
struct GeodesicRay {
    double xi = 0.0;
    Side side = Side::Left;
    int64_t root_level = 0;
    int64_t root_m = 0;
    std::vector<double> depths;
    std::vector<int64_t> levels;  // descending, levels.front() == root_level
    std::vector<int64_t> m;
    // Lowest level down to which the two deepest far points give the same path.
    int64_t stabilized_above = 0;
    double direction = 0.0;       // (x(s) - x_root) / (t_root - s) at the lowest stabilized level
    bool certified = false;       // path weight equals the last-passage value bit-exactly
    int64_t consistency_violations = 0;

    size_t size() const { return levels.size(); }
    int64_t bottom() const { return levels.back(); }
    std::optional<int64_t> at(int64_t level) const;
    bool stabilized(int64_t level) const { return level >= stabilized_above && level <= root_level; }
    std::string to_csv(const ScalingParams& params) const;
};

// Rays from several roots on one level toward direction_ray(xi, R), one sweep per depth.
std::vector<GeodesicRay> ray_bundle(const EnvironmentSpec& env, const ScalingParams& params, double xi,
                                    int64_t root_level, const std::vector<int64_t>& roots, Side side,
                                    const std::vector<double>& depths);
GeodesicRay ray(const EnvironmentSpec& env, const ScalingParams& params, double xi, const ScaledPoint& root, Side side,
                const std::vector<double>& depths);

struct Coalescence {
    int64_t level = 0;
    int64_t m = 0;
    bool stabilized = false;  // both rays stabilized there
};

// Highest level at which the two rays share a site (they agree from there down).
std::optional<Coalescence> coalescence(const GeodesicRay& a, const GeodesicRay& b);

// Highest level below which `left` stays strictly left of `right` down to their common bottom.
std::optional<int64_t> ordered_below(const GeodesicRay& left, const GeodesicRay& right);

// Levels where the two rays differ.
int64_t split_levels(const GeodesicRay& a, const GeodesicRay& b);

struct OrderingReport {
    int64_t checks = 0;
    int64_t violations = 0;
};

// Weak monotonicity of ray positions in xi (fixed root) and in root (fixed xi), at every
// level stabilized for all rays involved. swap_labels reverses the direction labels.
OrderingReport ordering_sweep(const EnvironmentSpec& env, const ScalingParams& params, std::vector<double> xis,
                              int64_t root_level, std::vector<int64_t> roots, const std::vector<double>& depths,
                              bool swap_labels = false);

// Leftmost or rightmost argmax of z -> b(z, s) + G(z; root) on each of the given levels.
GeodesicRay b_geodesic(const EnvironmentSpec& env, const ScalingParams& params, const EternalApprox& b,
                       int64_t root_level, int64_t root_m, Side side, const std::vector<int64_t>& levels);

// The same argmax for many roots at once, on a single lower level.
std::vector<int64_t> b_exits(const EnvironmentSpec& env, const ScalingParams& params, const EternalApprox& b,
                             int64_t root_level, int64_t m_lo, int64_t m_hi, int64_t level, Side side);

}  // namespace kpzlab
