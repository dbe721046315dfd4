#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kpzlab/lpp.hpp"
#include "kpzlab/scaling.hpp"

namespace kpzlab {

struct Tolerances {
    double stab = 1e-9;
    double mono = 1e-9;
    double d_sign = 1e-9;
    double mv = 1e-6;
    double split = 1e-6;
    double evol = 1e-5;
    double composition = 1e-9;
    double cluster = 1e-6;
};

// Sites a far-point field has to cover.
struct FieldLayout {
    std::vector<Window> windows;
    std::optional<int64_t> moves_from;

    void add(const ScalingParams& params, double t, double x_lo, double x_hi);
    void add_level(int64_t level, int64_t m_lo, int64_t m_hi);
};

// Last-passage values G(v; .) from a single far point v.
struct FarField {
    double xi = 0.0;
    double depth = 0.0;
    LatticePoint v;
    std::vector<Slice> slices;
    MoveTable moves;

    const Slice* find(int64_t level) const;
    bool covers(int64_t level, int64_t m) const;
    double value(int64_t level, int64_t m) const;
};

FarField far_field(const EnvironmentSpec& env, const ScalingParams& params, double xi, double depth,
                   const FieldLayout& layout);

// Replaces far_field, e.g. with a cached lookup.
using FarFieldSource = std::function<FarField(double xi, double depth, const FieldLayout& layout)>;

// Space-time Busemann values W(p; q) = G(v; q) - G(v; p) - 2 (level(q) - level(p)), in
// raw lattice units, from the deepest far point of a depth schedule.
class BusemannField {
public:
    double xi = 0.0;
    std::vector<double> depths;
    std::vector<FarField> fields;
    bool stabilized = false;

    const FarField& deepest() const { return fields.back(); }
    bool covers(int64_t level, int64_t m) const { return deepest().covers(level, m); }
    double raw(int64_t kp, int64_t mp, int64_t kq, int64_t mq) const;
    double scaled(const ScalingParams& params, int64_t kp, int64_t mp, int64_t kq, int64_t mq) const {
        return raw(kp, mp, kq, mq) / params.value_scale();
    }
    // Increment relative to `anchor` on the same level for every site of the slice.
    std::vector<double> level_profile(int64_t level, int64_t anchor_m, int64_t m_lo, int64_t m_hi) const;
};

// Computes one far field per depth; keeps only the last two.
BusemannField busemann_field(const EnvironmentSpec& env, const ScalingParams& params, double xi,
                             const FieldLayout& layout, const std::vector<double>& depths, double eps_stab = 1e-9,
                             const FarFieldSource& source = {});

// max_y |W(x0,s;y,t) - max_z {W(x0,s;z,s) + L_n(z,s;y,t)}| over the recorded windows, scaled units.
double busemann_evolution_residual(const EnvironmentSpec& env, const ScalingParams& params, const BusemannField& field,
                                   int64_t level_s, int64_t level_t);

struct BusemannEstimate {
    double xi = 0.0;
    double t = 0.0;
    int64_t level = 0;
    double anchor = 0.0;
    int64_t anchor_site = 0;
    double window_lo = 0.0, window_hi = 0.0, step = 0.0;
    std::vector<int64_t> sites;
    std::vector<double> x;
    std::vector<double> values;                   // scaled W(x0,t; x,t)
    std::vector<double> raw;                      // raw increments, exact
    std::vector<double> depths;
    std::vector<std::vector<double>> per_depth;   // raw increments per depth
    bool stabilized = false;
    double stabilization_depth = 0.0;             // shallowest depth from which all profiles agree; 0 if none

    std::string to_csv() const;
    std::string header_json(int64_t n) const;
};

BusemannEstimate busemann_profile(const EnvironmentSpec& env, const ScalingParams& params, double xi, double t,
                                  double a, double b, double step, const std::vector<double>& depths,
                                  double anchor = 0.0, double eps_stab = 1e-9, const FarFieldSource& source = {});

struct DifferenceProfile {
    double xi1 = 0.0, xi2 = 0.0, t = 0.0;
    int64_t level = 0;
    std::vector<int64_t> sites;
    std::vector<double> x;
    std::vector<double> values;  // scaled, D(0) = 0
    std::vector<double> raw;
    bool stabilized = false;
    int64_t monotone_violations = 0;

    std::string to_csv() const;
    std::string header_json(int64_t n) const;
};

DifferenceProfile difference_profile(const BusemannEstimate& e1, const BusemannEstimate& e2,
                                     const ScalingParams& params, double eps_mono = 1e-9);
DifferenceProfile difference_profile(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi2,
                                     double t, double a, double b, double step, const std::vector<double>& depths,
                                     double eps_mono = 1e-9, const FarFieldSource& source = {});

struct JumpReport {
    std::vector<double> directions;
    std::vector<double> left_values, right_values;  // scaled increments either side of each jump
    int64_t evaluations = 0;
};

// Directions in [xi_lo, xi_hi] where G(v_xi; q) - G(v_xi; p) changes, located to `resolution`.
JumpReport jump_directions(const EnvironmentSpec& env, const ScalingParams& params, const LatticePoint& p,
                           const LatticePoint& q, double xi_lo, double xi_hi, double resolution, double depth);

struct BurkeReport {
    double rho = 0.5;
    int64_t samples = 0;
    double ks_statistic = 0.0;
    double ks_p_value = 0.0;
    double lag1 = 0.0;
    double mean = 0.0;
    std::vector<double> increments;
};

BurkeReport stationary_boundary_check(uint64_t seed, double rho, int64_t m, int64_t k);

}  // namespace kpzlab
