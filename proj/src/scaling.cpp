#include "kpzlab/scaling.hpp"

#include <algorithm>
#include <string>

#include "kpzlab/lpp.hpp"

namespace kpzlab {

void ScalingParams::validate() const {
    if (n < 10) throw GeometryError("ScalingParams: n must be at least 10, got " + std::to_string(n));
}

LatticePoint lattice_of(const ScalingParams& params, const ScaledPoint& sp) {
    const double tn = sp.t * double(params.n);
    const double a = sp.x * params.space_unit();
    return {params.origin.i + int64_t(std::nearbyint(tn + a)), params.origin.j + int64_t(std::nearbyint(tn - a))};
}

LatticePoint to_lattice(const ScalingParams& params, const ScaledPoint& sp) {
    const double reach = (sp.t - params.apex_time) * double(params.n);
    if (!(reach >= std::abs(sp.x) * params.space_unit()))
        throw ConeError("to_lattice: (" + std::to_string(sp.x) + ", " + std::to_string(sp.t) + ") outside the cone");
    return lattice_of(params, sp);
}

ScaledPoint to_scaled(const ScalingParams& params, const LatticePoint& p) {
    return {position_of(params, p.offset()), time_of(params, p.level())};
}

int64_t level_of(const ScalingParams& params, double t) {
    return params.origin.level() + int64_t(std::nearbyint(2.0 * t * double(params.n)));
}

double time_of(const ScalingParams& params, int64_t level) {
    return double(level - params.origin.level()) / (2.0 * double(params.n));
}

int64_t site_of(const ScalingParams& params, int64_t level, double x) {
    const double a = x * params.space_unit();
    const int64_t rel = level - params.origin.level();
    int64_t m = (rel & 1) == 0 ? 2 * int64_t(std::nearbyint(a)) : 2 * int64_t(std::floor(a)) + 1;
    return params.origin.offset() + m;
}

double position_of(const ScalingParams& params, int64_t m) {
    return double(m - params.origin.offset()) / (2.0 * params.space_unit());
}

std::vector<int64_t> grid_sites(const ScalingParams& params, int64_t level, double a, double b, double step) {
    std::vector<int64_t> out;
    if (b < a) return out;
    if (step <= 0.0) {
        int64_t lo = site_of(params, level, a), hi = site_of(params, level, b);
        for (int64_t m = lo; m <= hi; m += 2) out.push_back(m);
        return out;
    }
    const int64_t count = int64_t(std::floor((b - a) / step + 1e-9)) + 1;
    for (int64_t k = 0; k < count; ++k) {
        int64_t m = site_of(params, level, a + double(k) * step);
        if (out.empty() || m > out.back()) out.push_back(m);
    }
    return out;
}

double scaled_from_raw(const ScalingParams& params, double raw, int64_t level_gap) {
    return (raw - 2.0 * double(level_gap)) / params.value_scale();
}

double scaled_value(const EnvironmentSpec& env, const ScalingParams& params, const ScaledPoint& from,
                    const ScaledPoint& to) {
    if (!(from.t < to.t)) throw OrderError("scaled_value: from.t must be strictly less than to.t");
    LatticePoint p = lattice_of(params, from), q = lattice_of(params, to);
    if (!dominated(p, q)) throw ConeError("scaled_value: target outside the forward cone of the source");
    const double g = lpp_value(env, p, q);
    return (g - ScalingParams::centering * (to.t - from.t) * double(params.n)) / params.value_scale();
}

LatticePoint direction_ray(const ScalingParams& params, double xi, double depth) {
    if (!(depth > 0.0)) throw GeometryError("direction_ray: depth must be positive");
    LatticePoint v = lattice_of(params, {xi * depth, -depth});
    LatticePoint o = lattice_of(params, {0.0, 0.0});
    if (!dominated(v, o)) throw ConeError("direction_ray: direction " + std::to_string(xi) + " outside the cone");
    return v;
}

}  // namespace kpzlab
