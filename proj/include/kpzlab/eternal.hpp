#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kpzlab/geodesy.hpp"
#include "kpzlab/interface.hpp"

namespace kpzlab {

// A space-time field b, raw lattice units, normalized so that b = 0 at the anchor.
struct EternalApprox {
    enum class Kind { Stitched, PureW1, PureW2 };

    Kind kind = Kind::Stitched;
    double xi1 = 0.0, xi2 = 0.0;
    InterfaceTrace trace;
    double theta = 0.0;
    int64_t anchor_level = 0, anchor_m = 0;
    std::vector<Slice> b;          // ascending levels
    double seam_mismatch = 0.0;    // scaled, largest |W2 - W1| on the seam

    const Slice* find(int64_t level) const;
    double raw(int64_t level, int64_t m) const;
    double scaled(const ScalingParams& params, int64_t level, int64_t m) const;
    std::vector<int64_t> levels() const;
    // b(., s) as an initial condition known on its window only.
    InitialCondition at_level(int64_t level) const;
    EternalApprox shifted(double raw_c) const;
    EternalApprox spiked(int64_t level, int64_t m, double raw_delta) const;
    std::string to_csv(const ScalingParams& params) const;
};

// W1 left of the trace and W2 right of it, from the fields of the setup the trace came from.
EternalApprox stitch(const ScalingParams& params, const MixedSetup& setup, const InterfaceTrace& trace,
                     double eps_mv = 1e-6);
EternalApprox pure_busemann(const MixedSetup& setup, bool second, int64_t level, int64_t anchor_m);

struct ResidualReport {
    double residual = 0.0;  // scaled
    int64_t m_lo = 0, m_hi = 0;
    int64_t worst_m = 0;
};

// max_x |b(x,t) - max_z {b(z,s) + L_n(z,s;x,t)}| over the largest certified window around the trace.
ResidualReport evolution_residual(const EnvironmentSpec& env, const ScalingParams& params, const EternalApprox& b,
                                  int64_t level_s, int64_t level_t);

struct Cutoffs {
    Position r, l;      // tau^{b,R}, tau^{b,L}
    int64_t ambiguous = 0;  // roots following neither ray
    int64_t monotone_violations = 0;
    std::vector<int64_t> roots;
    std::vector<uint8_t> follows1, follows2;
};

// Roots on [m_lo, m_hi] at level t classified by whether their b-geodesics down to `level`
// follow the (xi1, L) or the (xi2, R) ray; needs a setup recorded with moves.
Cutoffs cutoff_tau_b(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                     const EternalApprox& b, int64_t level_t, int64_t m_lo, int64_t m_hi, int64_t level);

// Whether [r, l] is one interval of constant D with jumps at both ends (a gap counts as a jump).
bool is_interval_of_D(const MixedSetup& setup, int64_t level, const Cutoffs& c, double tol_raw);

struct DecayRow {
    double s = 0.0;
    int64_t level = 0;
    double sup_diff = 0.0;      // scaled
    bool coalesced = false;     // all exits agree between the two conditions
};

struct DecayTable {
    std::vector<DecayRow> rows;
    double anchor = 0.0;
    // The deepest row is below factor times the first, or exactly 0.
    bool decayed(double factor = 0.1) const;
    std::string to_csv() const;
};

using ConditionAt = std::function<InitialCondition(double s)>;

// Recentered sup-distance at time t between the evolutions of f1 and f2 started at each s.
DecayTable one_force_one_solution(const EnvironmentSpec& env, const ScalingParams& params, const ConditionAt& f1,
                                  const ConditionAt& f2, const std::vector<double>& starts, double t, double a,
                                  double b, double anchor);

DecayRow decay_row(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f1,
                   const InitialCondition& f2, double t, double a, double b, double anchor);

struct SandwichRow {
    double depth = 0.0;
    std::vector<double> profile;  // scaled increments from the anchor site
    int64_t violations = 0;
};

struct SandwichReport {
    double xi = 0.0, xi1 = 0.0, xi2 = 0.0, t = 0.0;
    std::vector<int64_t> sites;
    std::vector<double> lower, upper;  // W^{xi1}, W^{xi2} increments, scaled
    std::vector<SandwichRow> rows;
    std::vector<std::vector<size_t>> clusters;  // row indices per distinct limit
    bool stabilized = false;
    int64_t violations() const;
    std::string to_json() const;
};

// Profiles G(v_k; .) - G(v_k; anchor) on [a, b] at time t for far points v_k in direction xi,
// checked against the xi1 / xi2 Busemann brackets; a depth in the bracket schedule is compared with the
// bracket from the same depth, any other with the deepest.
SandwichReport busemann_limit_forward(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi,
                                      double xi2, const std::vector<double>& sequence_depths, double t, double a,
                                      double b, double anchor, const std::vector<double>& bracket_depths,
                                      double cluster_tol = 1e-6);

struct SteeredStep {
    double depth = 0.0;
    int64_t level = 0;
    int64_t x = 0;              // switch root on that level
    bool both = false;          // its geodesics into the gap follow the xi1 ray on the left and the xi2 ray on the right
    double match = 0.0;         // sup |profile - stitched|, scaled, at the best seam
    int64_t seam = 0;           // gap where the matching stitched profile switches from W1 to W2
    bool seam_at_z = false;     // D is constant from z to the seam
    bool differs_from_w1 = false, differs_from_w2 = false;
};

struct SteeredResult {
    int64_t level = 0, z = 0;
    int64_t m_lo = 0, m_hi = 0;
    std::vector<SteeredStep> steps;
    bool matched(double tol = 1e-5) const;  // the deepest steps match with the seam at z
};

// Far points v_k on the levels below (z, t) where leftmost geodesics into the gap next to z where
// D jumps switch from the (xi1, L) ray to the (xi2, L) ray, compared `probe` levels below t
// (default: halfway down the setup, which must carry moves).
SteeredResult steered_sequence(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                               int64_t level, int64_t z, const std::vector<double>& depths, int64_t half_width,
                               int64_t probe = 0);

struct DimensionEstimate {
    std::vector<double> h;
    std::vector<int64_t> count;
    double slope = 0.0;
    bool defined = false;
    bool saturated = false;  // every box occupied at every scale
};

DimensionEstimate dimension_estimate(const SplitSet& s, const std::vector<double>& h);

}  // namespace kpzlab
