#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/busemann.hpp"

namespace kpzlab {

struct Profile {
    double t = 0.0;
    int64_t level = 0;
    std::vector<int64_t> sites;
    std::vector<double> x;
    std::vector<double> values;  // -inf marks the narrow-wedge sentinel

    std::string to_csv() const;
    // Restriction to the sites closest to a grid of step h (h <= 0 keeps everything).
    Profile subsample(const ScalingParams& params, double h) const;
};

class InitialCondition {
public:
    enum class Kind { NarrowWedge, Flat, Linear, Sampled, MixedBusemann };

    Kind kind = Kind::Flat;
    int64_t level = 0;
    double shift = 0.0;    // added to evolved values, scaled units
    double slope = 0.0;    // sigma for Linear, slope bound for window sizing otherwise
    double xi_ref = 0.0;
    double growth = 0.0;   // c with f(x) <= c (1 + |x|)
    double x0 = 0.0;
    int64_t site0 = 0;
    double xi1 = 0.0, xi2 = 0.0;
    double theta = 0.0;    // raw level of G(v2; .) - G(v1; .) where a mixed condition switches
    // Explicit raw values for Sampled / MixedBusemann / NarrowWedge.
    int64_t m_lo = 0;
    std::vector<double> raw_values;
    // Explicit values known only on their window (rather than -inf outside it).
    bool window_only = false;

    static InitialCondition narrow_wedge(const ScalingParams& params, double s, double z0);
    static InitialCondition flat(const ScalingParams& params, double s);
    static InitialCondition linear(const ScalingParams& params, double s, double sigma);
    static InitialCondition sampled(const ScalingParams& params, const Profile& profile);
    static InitialCondition sampled_raw(int64_t level, int64_t m_lo, std::vector<double> raw);
    // Stationary profile for direction xi: a walk with steps Exp(a) - Exp(1 - a) per site,
    // drawn from its own hash stream, pinned to 0 at x = 0 and known on [x_lo, x_hi].
    static InitialCondition stationary(const ScalingParams& params, double s, double xi, uint64_t seed, double x_lo,
                                       double x_hi);
    // W^{xi1}(x0,s; ., s) left of x0 and W^{xi2}(x0,s; ., s) right of it, on the
    // sites both fields record at level s.
    static InitialCondition mixed_busemann(const ScalingParams& params, const BusemannField& w1,
                                           const BusemannField& w2, double s, double x0);
    static InitialCondition mixed_busemann_at(const BusemannField& w1, const BusemannField& w2, int64_t level,
                                              int64_t site0);
    // G(v1; .) up to the cut and G(v2; .) - theta beyond it, raw and up to a constant. A cut
    // between two sites gives the lattice version of an anchor where D = theta.
    static InitialCondition mixed_busemann_cut(const BusemannField& w1, const BusemannField& w2, int64_t level,
                                               int64_t cut, double theta);

    bool unbounded() const { return kind == Kind::Flat || kind == Kind::Linear; }
    // True when values outside [m_lo, m_hi] are unknown rather than -inf.
    bool truncated() const { return kind == Kind::MixedBusemann || window_only; }
    int64_t m_hi() const { return m_lo + 2 * (int64_t(raw_values.size()) - 1); }
    double raw(const ScalingParams& params, int64_t m) const;
    InitialCondition shifted(double c) const;
    std::string describe() const;
};

struct Evolution {
    int64_t source_level = 0;
    int64_t level = 0;
    double t = 0.0;
    std::vector<int64_t> sites;
    std::vector<double> raw;                     // max_z {f(z) + G(z; x)} in lattice units
    std::vector<double> values;                  // scaled
    std::vector<int64_t> chi_left, chi_right;    // extremal argmax sites on the source level
    int64_t search_lo = 0, search_hi = 0;
    int widenings = 0;

    Profile profile(const ScalingParams& params) const;
};

struct EvolveOptions {
    double safety = 3.0;
    int max_widenings = 6;
};

double search_radius(const InitialCondition& f, double dt, double safety = 3.0);

Evolution evolve(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f, double t,
                 double a, double b, const EvolveOptions& opt = {});
Evolution evolve_sites(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                       int64_t level, int64_t m_lo, int64_t m_hi, const EvolveOptions& opt = {});

// Right (z >= x0) and left (z <= x0) restricted sups on several output windows from one sweep.
struct SplitEvolution {
    int64_t source_level = 0;
    int64_t site0 = 0;
    std::vector<Slice> right, left;  // with exit sites
    int64_t search_lo = 0, search_hi = 0;
    int widenings = 0;
};

SplitEvolution split_evolve(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                            int64_t site0, const std::vector<Window>& outputs, const EvolveOptions& opt = {});

double d_function(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f, double x0,
                  double x, double t);

std::pair<double, double> exit_points(const EnvironmentSpec& env, const ScalingParams& params,
                                      const InitialCondition& f, double x, double t);

}  // namespace kpzlab
