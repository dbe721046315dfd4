#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "kpzlab/env.hpp"

namespace kpzlab {

struct ScaledPoint {
    double x = 0.0;
    double t = 0.0;
};

struct ScalingParams {
    static constexpr double c_x = 1.5874010519681994;  // 2^{2/3}
    static constexpr double c_v = 2.5198420997897464;  // 2^{4/3}
    static constexpr double centering = 4.0;

    int64_t n = 100;
    // to_lattice rejects points outside the cone above (0, apex_time).
    double apex_time = 0.0;
    // Lattice image of the landscape origin.
    LatticePoint origin{0, 0};

    explicit ScalingParams(int64_t n_ = 100) : n(n_) { validate(); }

    void validate() const;
    double space_unit() const { return c_x * std::pow(double(n), 2.0 / 3.0); }
    double value_scale() const { return c_v * std::cbrt(double(n)); }
    // Spacing of neighbouring sites on one level, in landscape units.
    double site_spacing() const { return 1.0 / space_unit(); }
};

// (round(tn + a), round(tn - a)) with a = c_x x n^{2/3}, no cone check.
LatticePoint lattice_of(const ScalingParams& params, const ScaledPoint& sp);
LatticePoint to_lattice(const ScalingParams& params, const ScaledPoint& sp);
ScaledPoint to_scaled(const ScalingParams& params, const LatticePoint& p);

int64_t level_of(const ScalingParams& params, double t);
double time_of(const ScalingParams& params, int64_t level);
// Offset m on `level` closest to landscape position x.
int64_t site_of(const ScalingParams& params, int64_t level, double x);
double position_of(const ScalingParams& params, int64_t m);

// Lattice sites on `level` covering [a, b]; step <= 0 means every site.
std::vector<int64_t> grid_sites(const ScalingParams& params, int64_t level, double a, double b, double step);

// (G - 2 * level difference) / (c_v n^{1/3}).
double scaled_from_raw(const ScalingParams& params, double raw, int64_t level_gap);

double scaled_value(const EnvironmentSpec& env, const ScalingParams& params, const ScaledPoint& from,
                    const ScaledPoint& to);

// Lattice far point for direction xi at depth R, i.e. the image of (xi R, -R).
LatticePoint direction_ray(const ScalingParams& params, double xi, double depth);

}  // namespace kpzlab
