#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpzlab/kpz.hpp"

namespace kpzlab {

// Interface location on one level. Offsets with the parity of the level are sites;
// the other parity marks the gap between two neighbouring sites.
class Position {
public:
    enum class Tag { Finite, MinusInf, PlusInf };

    Position() = default;
    static Position at(int64_t m) { return Position(Tag::Finite, m); }
    static Position minus_inf() { return Position(Tag::MinusInf, 0); }
    static Position plus_inf() { return Position(Tag::PlusInf, 0); }

    Tag tag() const { return tag_; }
    bool finite() const { return tag_ == Tag::Finite; }
    // Throws on sentinels.
    int64_t m() const;
    double x(const ScalingParams& params) const;
    std::string str() const;

    bool operator==(const Position&) const = default;
    bool operator<(const Position& o) const;
    bool operator<=(const Position& o) const { return !(o < *this); }

private:
    Position(Tag t, int64_t m) : tag_(t), m_(m) {}
    Tag tag_ = Tag::Finite;
    int64_t m_ = 0;
};

// Site a position snaps to: gaps round up for tau- and down for tau+.
int64_t grid_site(const Position& p, int64_t level, bool up);

// Within one site spacing (two offset units); sentinels match only themselves.
bool same_cell(const Position& a, const Position& b);

struct InterfaceTrace {
    double x0 = 0.0, s = 0.0;
    int64_t start_level = 0;
    int64_t start_m = 0;
    std::vector<int64_t> levels;  // ascending, levels.front() == start_level
    std::vector<double> times;
    std::vector<Position> minus, plus;
    std::string initial;
    // Lemma-style identity check between the two Busemann evolutions (mixed traces only).
    double mv_residual = 0.0;
    int64_t mv_anomalies = 0;

    size_t size() const { return levels.size(); }
    int64_t ordering_violations() const;
    std::string to_csv(const ScalingParams& params) const;
};

struct InterfaceOptions {
    double eps_d = 1e-9;
    double eps_mv = 1e-6;
    int expansions = 2;
    EvolveOptions evolve;
};

// d on the output windows of a split evolution, in raw units.
struct DProfile {
    int64_t level = 0;
    int64_t m_lo = 0;
    std::vector<double> d;
    std::vector<double> h;  // max of both halves
};

// Sign-change positions of d on one level (see Position for gap offsets).
std::pair<Position, Position> interface_positions(const DProfile& dp, double tol_raw);

InterfaceTrace interface(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                         int64_t split_m, const std::vector<int64_t>& levels, const InterfaceOptions& opt = {});
InterfaceTrace interface(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                         double x0, const std::vector<double>& times, const InterfaceOptions& opt = {});

// Pair of Busemann fields recorded on a ladder of levels, wide enough for mixed
// interfaces started anywhere in [x_lo, x_hi] on any of them and run to the top.
struct MixedSetup {
    double xi1 = 0.0, xi2 = 0.0;
    std::vector<int64_t> levels;  // ascending
    double x_lo = 0.0, x_hi = 0.0;
    BusemannField w1, w2;

    std::vector<double> times(const ScalingParams& params) const;
    size_t index_of(int64_t level) const;
};

MixedSetup mixed_setup(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi2,
                       const std::vector<double>& times, double x_lo, double x_hi, const std::vector<double>& depths,
                       bool moves = false, double safety = 3.0);

InterfaceTrace mixed_interface(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                               int64_t level, int64_t start_m, const InterfaceOptions& opt = {});
// Mixed interface switching from W1 to W2 where G(v2; .) - G(v1; .) reaches theta; the cut may be a gap.
InterfaceTrace mixed_interface_cut(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                                   int64_t level, int64_t cut, double theta, const InterfaceOptions& opt = {});
InterfaceTrace mixed_interface(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                               double s, double x0, const InterfaceOptions& opt = {});

struct SemigroupResult {
    double minus = 0.0, plus = 0.0;  // largest discrepancy in sites; inf on a sentinel mismatch
    double worst() const { return std::max(minus, plus); }
};

// Restarts both interfaces at level index r from the evolved mixed profile split at tau(r).
SemigroupResult semigroup_check(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                                const InterfaceTrace& trace, size_t r, const InterfaceOptions& opt = {});

struct SplitSet {
    int64_t level = 0;
    double t = 0.0;
    std::vector<int64_t> sites;
    std::vector<double> x, D;  // D scaled
    std::vector<uint8_t> is_L, is_R, is_M;
    std::vector<int64_t> interval;
    std::vector<std::pair<size_t, size_t>> intervals;  // index ranges

    size_t count_L() const;
    size_t count_R() const;
    std::string to_csv() const;
};

SplitSet split_set(const DifferenceProfile& d, double eps_D = 1e-6);
SplitSet splitting_points(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi2, double t,
                          double a, double b, double step, const std::vector<double>& depths, double eps_D = 1e-6);
// Split set on one recorded level of a setup (every site).
SplitSet splitting_points(const ScalingParams& params, const MixedSetup& setup, int64_t level, int64_t m_lo,
                          int64_t m_hi, double eps_D = 1e-6);

struct ChainStep {
    int64_t level = 0;
    int64_t g1 = 0, g2 = 0;      // leftmost rays at this level
    double f_lo = 0.0, f_hi = 0.0;  // F at the bracket ends, scaled
    std::optional<int64_t> root;    // first site with F <= 0
    bool exact = false;             // F(root) = 0; otherwise the anchor is the gap left of root
    Position tau;                   // where the chain's interface crosses this level
    bool verified = false;
    Position landed;
};

struct ChainResult {
    std::vector<ChainStep> steps;
    InterfaceTrace trace;  // forward trace from the deepest root
    double theta = 0.0;        // raw D at the start
    bool complete = false;
    bool verified = false;     // the deepest anchor's trace passes every anchor and the start
    std::string failure;
};

// Walks back from (x, t) over setup.levels below t, verifying each step forward.
ChainResult bi_infinite_chain(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                              int64_t level, int64_t x, const InterfaceOptions& opt = {});

// x flagged when the (xi1, L) ray and the (xi2, R) ray separate immediately and stay apart for dk levels,
// starting from x or from neighbouring sites of the cell around x.
std::vector<uint8_t> branch_points(const MixedSetup& setup, int64_t level, const std::vector<int64_t>& sites,
                                   int64_t dk);

struct MeetingReport {
    std::optional<int64_t> t_RL, t_LL, t_RR, t_LR;  // first meeting levels
    int64_t ordering_violations = 0;
    int64_t squeeze_violations = 0;  // tau+(x0) = tau-(y0) on the meeting window
    int64_t disjoint_violations = 0; // tau+(x0) < tau-(y0) at every level
    bool all_met() const { return t_RL && t_LL && t_RR && t_LR; }
};

MeetingReport meeting_and_ordering(const InterfaceTrace& a, const InterfaceTrace& b);

struct Bubble {
    size_t open = 0;   // last equal level index before separation
    size_t close = 0;  // first equal level index after it
    bool persists = false;
    bool interior() const { return open > 0; }  // opens after the start level
};

std::vector<Bubble> bubble_search(const InterfaceTrace& trace);

}  // namespace kpzlab
