#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kpzlab/env.hpp"

namespace kpzlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr int32_t kNoExit = std::numeric_limits<int32_t>::min();

enum class Side { Left, Right };

// One antidiagonal level k = i + j. Sites are addressed by the offset m = i - j,
// which has the parity of k; index r holds m = m_lo + 2r.
struct Slice {
    int64_t level = 0;
    int64_t m_lo = 0;
    std::vector<double> value;
    std::vector<int32_t> exit_left, exit_right;

    int64_t size() const { return int64_t(value.size()); }
    int64_t m_hi() const { return m_lo + 2 * (size() - 1); }
    bool contains(int64_t m) const { return size() > 0 && m >= m_lo && m <= m_hi() && ((m - m_lo) & 1) == 0; }
    int64_t index(int64_t m) const { return (m - m_lo) / 2; }
    double at(int64_t m) const { return contains(m) ? value[size_t(index(m))] : kNegInf; }
};

struct Window {
    int64_t level = 0;
    int64_t m_lo = 0;
    int64_t m_hi = 0;
};

enum class Move : uint8_t { Tie = 0, Left = 1, Right = 2, Dead = 3 };

// Predecessor choices of channel 0, two bits per site, for levels above `base`.
class MoveTable {
public:
    int64_t base = 0;
    std::vector<int64_t> m_lo;
    std::vector<int64_t> count;
    std::vector<std::vector<uint8_t>> bits;

    bool empty() const { return bits.empty(); }
    int64_t top() const { return base + int64_t(bits.size()); }
    bool covers(int64_t level, int64_t m) const;
    Move at(int64_t level, int64_t m) const;
    // Offsets from (level, m) down to level `stop` (inclusive), following
    // the extremal predecessor on ties.
    std::vector<int64_t> backtrack(int64_t level, int64_t m, int64_t stop, Side side) const;
};

struct SweepSpec {
    int64_t source_level = 0;
    int64_t source_m_lo = 0;
    std::vector<std::vector<double>> boundary;  // one vector per channel
    std::vector<Window> record;
    bool exits = false;
    std::optional<int64_t> moves_from;
};

struct SweepOutput {
    std::vector<std::vector<Slice>> channels;  // [channel][record index]
    MoveTable moves;
    int64_t cells = 0;
};

// Max-plus sweep: value(q) = w(q) + max(value(q - e1), value(q - e2)) starting from
// the boundary values on the source level; only sites that can influence a
// recorded window are visited.
SweepOutput sweep(const EnvironmentSpec& env, const SweepSpec& spec);

struct ValueField {
    enum class Orientation { ToTarget, FromSource };
    Orientation orientation = Orientation::FromSource;
    LatticePoint anchor;
    LatticeRect rect;
    std::vector<double> values;  // row-major, rows indexed by j

    double at(int64_t i, int64_t j) const { return values[size_t((j - rect.lo.j) * rect.width() + (i - rect.lo.i))]; }
    double at(const LatticePoint& p) const { return at(p.i, p.j); }
    std::string to_csv() const;
};

struct Geodesic {
    std::vector<LatticePoint> points;

    double weight(const EnvironmentSpec& env) const;
    std::string to_csv() const;
};

double lpp_value(const EnvironmentSpec& env, const LatticePoint& p, const LatticePoint& q);
ValueField value_field_from(const EnvironmentSpec& env, const LatticePoint& p, const LatticeRect& rect);
ValueField value_field_to(const EnvironmentSpec& env, const LatticePoint& q, const LatticeRect& rect);
Geodesic geodesic(const EnvironmentSpec& env, const LatticePoint& p, const LatticePoint& q, Side side);

enum class Convention { Standard, DoubleCountedTarget };
double composition_residual(const EnvironmentSpec& env, const LatticePoint& p, const LatticePoint& q, int64_t level,
                            Convention convention = Convention::Standard);

struct NoBubbleReport {
    int64_t trials = 0;
    int64_t distinct = 0;  // pairs where Left and Right geodesics differ
    int64_t violations = 0;
};
NoBubbleReport no_bubble_scan(const EnvironmentSpec& env, const LatticeRect& rect, int64_t trials,
                              uint64_t sample_seed = 1);

// Sites of the window [m_lo, m_hi] at `level` (parity-adjusted inward).
Window window_on_level(int64_t level, int64_t m_lo, int64_t m_hi);

}  // namespace kpzlab
