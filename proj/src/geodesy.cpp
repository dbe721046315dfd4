#include "kpzlab/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kpzlab/eternal.hpp"
#include "kpzlab/kpz.hpp"

namespace kpzlab {

std::optional<int64_t> GeodesicRay::at(int64_t level) const {
    if (levels.empty() || level > root_level || level < bottom()) return std::nullopt;
    if (int64_t(levels.size()) == root_level - bottom() + 1) return m[size_t(root_level - level)];
    auto it = std::lower_bound(levels.begin(), levels.end(), level, std::greater<>());
    if (it == levels.end() || *it != level) return std::nullopt;
    return m[size_t(it - levels.begin())];
}

std::string GeodesicRay::to_csv(const ScalingParams& params) const {
    std::ostringstream os;
    os.precision(10);
    os << "t,x,stabilized\n";
    for (size_t k = 0; k < levels.size(); ++k)
        os << time_of(params, levels[k]) << ',' << position_of(params, m[k]) << ',' << (stabilized(levels[k]) ? 1 : 0)
           << '\n';
    return os.str();
}

namespace {

bool certify(const EnvironmentSpec& env, const GeodesicRay& r, double value) {
    double sum = 0.0;
    for (size_t k = 0; k + 1 < r.levels.size(); ++k) sum += weight(env, LatticePoint::from_level(r.levels[k], r.m[k]));
    return sum == value;
}

}  // namespace

std::vector<GeodesicRay> ray_bundle(const EnvironmentSpec& env, const ScalingParams& params, double xi,
                                    int64_t root_level, const std::vector<int64_t>& roots, Side side,
                                    const std::vector<double>& depths) {
    if (roots.empty()) return {};
    if (depths.empty()) throw GeometryError("ray_bundle: empty depth schedule");
    std::vector<double> ds = depths;
    std::sort(ds.begin(), ds.end());
    const auto [lo, hi] = std::minmax_element(roots.begin(), roots.end());

    std::vector<GeodesicRay> out(roots.size());
    std::vector<std::vector<int64_t>> prev(roots.size());
    int64_t prev_bottom = root_level;
    for (size_t d = 0; d < ds.size(); ++d) {
        const LatticePoint v = direction_ray(params, xi, ds[d]);
        FieldLayout layout;
        layout.add_level(root_level, *lo, *hi);
        layout.moves_from = v.level();
        FarField f = far_field(env, params, xi, ds[d], layout);
        for (size_t r = 0; r < roots.size(); ++r) {
            auto path = f.moves.backtrack(root_level, roots[r], v.level(), side);
            if (d + 1 == ds.size()) {
                GeodesicRay& g = out[r];
                g.xi = xi;
                g.side = side;
                g.root_level = root_level;
                g.root_m = roots[r];
                g.depths = ds;
                g.m = path;
                g.levels.resize(path.size());
                for (size_t k = 0; k < path.size(); ++k) g.levels[k] = root_level - int64_t(k);
                g.certified = certify(env, g, f.value(root_level, roots[r]));
                g.stabilized_above = root_level;
                if (d > 0) {
                    const auto& p = prev[r];
                    size_t k = 0;
                    while (k < p.size() && p[k] == path[k]) ++k;
                    if (k > 0) g.stabilized_above = root_level - int64_t(k - 1);
                }
                // Direction from the lowest stabilized level, or from the shallower far point's level.
                int64_t lev = g.stabilized_above < root_level ? g.stabilized_above : (d > 0 ? prev_bottom : g.bottom());
                if (lev == root_level) lev = g.bottom();
                const int64_t mm = g.m[size_t(root_level - lev)];
                g.direction = (position_of(params, mm) - position_of(params, g.root_m)) /
                              (time_of(params, root_level) - time_of(params, lev));
            } else {
                prev[r] = std::move(path);
            }
        }
        prev_bottom = v.level();
    }
    return out;
}

GeodesicRay ray(const EnvironmentSpec& env, const ScalingParams& params, double xi, const ScaledPoint& root, Side side,
                const std::vector<double>& depths) {
    const int64_t level = level_of(params, root.t);
    return ray_bundle(env, params, xi, level, {site_of(params, level, root.x)}, side, depths).front();
}

std::optional<Coalescence> coalescence(const GeodesicRay& a, const GeodesicRay& b) {
    const int64_t top = std::min(a.root_level, b.root_level), low = std::max(a.bottom(), b.bottom());
    for (int64_t k = top; k >= low; --k)
        if (*a.at(k) == *b.at(k)) return Coalescence{k, *a.at(k), a.stabilized(k) && b.stabilized(k)};
    return std::nullopt;
}

std::optional<int64_t> ordered_below(const GeodesicRay& left, const GeodesicRay& right) {
    const int64_t top = std::min(left.root_level, right.root_level), low = std::max(left.bottom(), right.bottom());
    if (top < low) return std::nullopt;
    if (!(*left.at(low) < *right.at(low))) return std::nullopt;
    int64_t k = low;
    while (k + 1 <= top && *left.at(k + 1) < *right.at(k + 1)) ++k;
    return k;
}

int64_t split_levels(const GeodesicRay& a, const GeodesicRay& b) {
    const int64_t top = std::min(a.root_level, b.root_level), low = std::max(a.bottom(), b.bottom());
    int64_t c = 0;
    for (int64_t k = top; k >= low; --k) c += *a.at(k) != *b.at(k);
    return c;
}

OrderingReport ordering_sweep(const EnvironmentSpec& env, const ScalingParams& params, std::vector<double> xis,
                              int64_t root_level, std::vector<int64_t> roots, const std::vector<double>& depths,
                              bool swap_labels) {
    std::sort(xis.begin(), xis.end());
    std::sort(roots.begin(), roots.end());
    std::vector<std::vector<GeodesicRay>> rays;
    for (double xi : xis) rays.push_back(ray_bundle(env, params, xi, root_level, roots, Side::Left, depths));
    if (swap_labels) std::reverse(rays.begin(), rays.end());
    int64_t low = std::numeric_limits<int64_t>::min();
    for (const auto& row : rays)
        for (const auto& r : row) low = std::max(low, r.stabilized_above);
    OrderingReport rep;
    for (int64_t k = root_level; k >= low; --k) {
        for (size_t i = 0; i < rays.size(); ++i)
            for (size_t j = 0; j < roots.size(); ++j) {
                const int64_t here = *rays[i][j].at(k);
                if (i + 1 < rays.size()) {
                    ++rep.checks;
                    if (*rays[i + 1][j].at(k) < here) ++rep.violations;
                }
                if (j + 1 < roots.size()) {
                    ++rep.checks;
                    if (*rays[i][j + 1].at(k) < here) ++rep.violations;
                }
            }
    }
    return rep;
}

std::vector<int64_t> b_exits(const EnvironmentSpec& env, const ScalingParams& params, const EternalApprox& b,
                             int64_t root_level, int64_t m_lo, int64_t m_hi, int64_t level, Side side) {
    auto ev = evolve_sites(env, params, b.at_level(level), root_level, m_lo, m_hi);
    return side == Side::Left ? ev.chi_left : ev.chi_right;
}

GeodesicRay b_geodesic(const EnvironmentSpec& env, const ScalingParams& params, const EternalApprox& b,
                       int64_t root_level, int64_t root_m, Side side, const std::vector<int64_t>& levels) {
    std::vector<int64_t> ls = levels;
    std::sort(ls.begin(), ls.end(), std::greater<>());
    GeodesicRay g;
    g.side = side;
    g.root_level = root_level;
    g.root_m = root_m;
    g.levels.push_back(root_level);
    g.m.push_back(root_m);
    for (int64_t s : ls) {
        if (s >= root_level) continue;
        g.levels.push_back(s);
        g.m.push_back(b_exits(env, params, b, root_level, root_m, root_m, s, side).front());
    }
    // Restart from each intermediate point and compare the tail.
    for (size_t k = 1; k + 1 < g.levels.size(); ++k) {
        const int64_t next = b_exits(env, params, b, g.levels[k], g.m[k], g.m[k], g.levels[k + 1], side).front();
        if (next != g.m[k + 1]) ++g.consistency_violations;
    }
    g.stabilized_above = g.levels.back();
    g.certified = true;
    return g;
}

}  // namespace kpzlab
