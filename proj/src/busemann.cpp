#include "kpzlab/busemann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "kpzlab/stats.hpp"

namespace kpzlab {

void FieldLayout::add(const ScalingParams& params, double t, double x_lo, double x_hi) {
    const int64_t level = level_of(params, t);
    windows.push_back(window_on_level(level, site_of(params, level, x_lo), site_of(params, level, x_hi)));
}

void FieldLayout::add_level(int64_t level, int64_t m_lo, int64_t m_hi) {
    windows.push_back(window_on_level(level, m_lo, m_hi));
}

const Slice* FarField::find(int64_t level) const {
    for (const auto& s : slices)
        if (s.level == level) return &s;
    return nullptr;
}

bool FarField::covers(int64_t level, int64_t m) const {
    for (const auto& s : slices)
        if (s.level == level && s.contains(m)) return true;
    return false;
}

double FarField::value(int64_t level, int64_t m) const {
    for (const auto& s : slices)
        if (s.level == level && s.contains(m)) return s.value[size_t(s.index(m))];
    throw WindowOverflow("far field: site (level " + std::to_string(level) + ", offset " + std::to_string(m) +
                         ") not recorded");
}

FarField far_field(const EnvironmentSpec& env, const ScalingParams& params, double xi, double depth,
                   const FieldLayout& layout) {
    FarField f;
    f.xi = xi;
    f.depth = depth;
    f.v = direction_ray(params, xi, depth);
    for (const auto& w : layout.windows)
        if (w.level <= f.v.level()) throw ConeError("far_field: window at or below the far point");
    SweepSpec spec;
    spec.source_level = f.v.level();
    spec.source_m_lo = f.v.offset();
    spec.boundary = {{0.0}};
    spec.record = layout.windows;
    spec.moves_from = layout.moves_from;
    auto out = sweep(env, spec);
    f.slices = std::move(out.channels[0]);
    // Merge duplicate levels into one slice so lookups see the union.
    std::sort(f.slices.begin(), f.slices.end(), [](const Slice& a, const Slice& b) {
        return a.level != b.level ? a.level < b.level : a.m_lo < b.m_lo;
    });
    std::vector<Slice> merged;
    for (auto& s : f.slices) {
        if (s.size() == 0) continue;
        if (!merged.empty() && merged.back().level == s.level) {
            Slice& t = merged.back();
            int64_t lo = std::min(t.m_lo, s.m_lo), hi = std::max(t.m_hi(), s.m_hi());
            Slice u;
            u.level = s.level;
            u.m_lo = lo;
            u.value.assign(size_t((hi - lo) / 2 + 1), kNegInf);
            for (const Slice* src : {&t, &s})
                for (int64_t r = 0; r < src->size(); ++r) u.value[size_t((src->m_lo - lo) / 2 + r)] = src->value[size_t(r)];
            t = std::move(u);
        } else {
            merged.push_back(std::move(s));
        }
    }
    f.slices = std::move(merged);
    f.moves = std::move(out.moves);
    for (const auto& s : f.slices)
        for (double v : s.value)
            if (v == kNegInf) throw ConeError("far_field: recorded window not reachable from the far point");
    return f;
}

double BusemannField::raw(int64_t kp, int64_t mp, int64_t kq, int64_t mq) const {
    const FarField& f = deepest();
    return f.value(kq, mq) - f.value(kp, mp) - 2.0 * double(kq - kp);
}

std::vector<double> BusemannField::level_profile(int64_t level, int64_t anchor_m, int64_t m_lo, int64_t m_hi) const {
    std::vector<double> out;
    const double a = deepest().value(level, anchor_m);
    for (int64_t m = m_lo; m <= m_hi; m += 2) out.push_back(deepest().value(level, m) - a);
    return out;
}

namespace {

// Largest deviation between increments of two far fields over all recorded sites.
double field_discrepancy(const FarField& f, const FarField& g) {
    const Slice& ref = f.slices.front();
    const int64_t k0 = ref.level, m0 = ref.m_lo;
    const double f0 = f.value(k0, m0), g0 = g.value(k0, m0);
    double worst = 0.0;
    for (const auto& s : f.slices)
        for (int64_t r = 0; r < s.size(); ++r) {
            int64_t m = s.m_lo + 2 * r;
            worst = std::max(worst, std::abs((s.value[size_t(r)] - f0) - (g.value(s.level, m) - g0)));
        }
    return worst;
}

}  // namespace

BusemannField busemann_field(const EnvironmentSpec& env, const ScalingParams& params, double xi,
                             const FieldLayout& layout, const std::vector<double>& depths, double eps_stab,
                             const FarFieldSource& source) {
    if (depths.empty()) throw GeometryError("busemann_field: empty depth schedule");
    if (layout.windows.empty()) throw GeometryError("busemann_field: empty layout");
    BusemannField b;
    b.xi = xi;
    b.depths = depths;
    for (double R : depths) b.fields.push_back(source ? source(xi, R, layout) : far_field(env, params, xi, R, layout));
    if (b.fields.size() >= 2)
        b.stabilized = field_discrepancy(b.fields[b.fields.size() - 2], b.fields.back()) <=
                       eps_stab * params.value_scale();
    return b;
}

double busemann_evolution_residual(const EnvironmentSpec& env, const ScalingParams& params, const BusemannField& field,
                                   int64_t level_s, int64_t level_t) {
    if (level_t <= level_s) throw OrderError("busemann_evolution_residual: s must precede t");
    const FarField& f = field.deepest();
    const Slice* src = f.find(level_s);
    const Slice* dst = f.find(level_t);
    if (!src || !dst) throw WindowOverflow("busemann_evolution_residual: level not recorded");
    const int64_t anchor = src->m_lo + 2 * (src->size() / 2);
    const double base = f.value(level_s, anchor);
    SweepSpec spec;
    spec.source_level = level_s;
    spec.source_m_lo = src->m_lo;
    std::vector<double> bnd(src->value.size());
    for (size_t r = 0; r < bnd.size(); ++r) bnd[r] = src->value[r] - base;
    spec.boundary = {bnd};
    spec.record = {{level_t, dst->m_lo, dst->m_hi()}};
    auto out = sweep(env, spec);
    const Slice& h = out.channels[0][0];
    double worst = 0.0;
    for (int64_t r = 0; r < h.size(); ++r) {
        double lhs = dst->value[size_t(r)] - base;
        worst = std::max(worst, std::abs(lhs - h.value[size_t(r)]));
    }
    return worst / params.value_scale();
}

BusemannEstimate busemann_profile(const EnvironmentSpec& env, const ScalingParams& params, double xi, double t,
                                  double a, double b, double step, const std::vector<double>& depths, double anchor,
                                  double eps_stab, const FarFieldSource& source) {
    if (depths.empty()) throw GeometryError("busemann_profile: empty depth schedule");
    if (anchor < a || anchor > b) throw GeometryError("busemann_profile: anchor outside window");
    BusemannEstimate e;
    e.xi = xi;
    e.t = t;
    e.level = level_of(params, t);
    e.anchor = anchor;
    e.anchor_site = site_of(params, e.level, anchor);
    e.window_lo = a;
    e.window_hi = b;
    e.step = step;
    e.depths = depths;
    e.sites = grid_sites(params, e.level, a, b, step);
    if (std::find(e.sites.begin(), e.sites.end(), e.anchor_site) == e.sites.end()) {
        e.sites.push_back(e.anchor_site);
        std::sort(e.sites.begin(), e.sites.end());
    }
    for (int64_t m : e.sites) e.x.push_back(position_of(params, m));

    FieldLayout layout;
    layout.add_level(e.level, e.sites.front(), e.sites.back());
    for (double R : depths) {
        FarField f = source ? source(xi, R, layout) : far_field(env, params, xi, R, layout);
        const double base = f.value(e.level, e.anchor_site);
        std::vector<double> prof;
        for (int64_t m : e.sites) prof.push_back(f.value(e.level, m) - base);
        e.per_depth.push_back(std::move(prof));
    }
    const double tol = eps_stab * params.value_scale();
    auto agree = [&](size_t i, size_t j) {
        for (size_t r = 0; r < e.sites.size(); ++r)
            if (std::abs(e.per_depth[i][r] - e.per_depth[j][r]) > tol) return false;
        return true;
    };
    const size_t K = e.per_depth.size();
    e.stabilized = K >= 2 && agree(K - 2, K - 1);
    if (e.stabilized) {
        size_t first = K - 2;
        while (first > 0 && agree(first - 1, K - 1)) --first;
        e.stabilization_depth = depths[first];
    }
    e.raw = e.per_depth.back();
    for (double v : e.raw) e.values.push_back(v / params.value_scale());
    return e;
}

namespace {

std::string xy_csv(const std::vector<double>& x, const std::vector<double>& v) {
    std::string s = "x,value\n";
    char buf[80];
    for (size_t k = 0; k < x.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.10g,%.17g\n", x[k], v[k]);
        s += buf;
    }
    return s;
}

}  // namespace

std::string BusemannEstimate::to_csv() const { return xy_csv(x, values); }

std::string BusemannEstimate::header_json(int64_t n) const {
    nlohmann::json j{{"xi", xi},       {"t", t},           {"n", n}, {"depths", depths}, {"stabilized", stabilized},
                     {"anchor", anchor}, {"stabilization_depth", stabilization_depth}};
    return j.dump();
}

std::string DifferenceProfile::to_csv() const { return xy_csv(x, values); }

std::string DifferenceProfile::header_json(int64_t n) const {
    nlohmann::json j{{"xi1", xi1}, {"xi2", xi2}, {"t", t}, {"n", n}, {"stabilized", stabilized},
                     {"monotone_violations", monotone_violations}};
    return j.dump();
}

DifferenceProfile difference_profile(const BusemannEstimate& e1, const BusemannEstimate& e2,
                                     const ScalingParams& params, double eps_mono) {
    if (e1.sites != e2.sites || e1.level != e2.level) throw GeometryError("difference_profile: grids differ");
    if (!e1.stabilized || !e2.stabilized)
        throw StabilizationFailed("difference_profile: Busemann profiles not stabilized");
    DifferenceProfile d;
    d.xi1 = e1.xi;
    d.xi2 = e2.xi;
    d.t = e1.t;
    d.level = e1.level;
    d.sites = e1.sites;
    d.x = e1.x;
    d.stabilized = true;
    const int64_t zero = site_of(params, e1.level, 0.0);
    auto it = std::find(d.sites.begin(), d.sites.end(), zero);
    const size_t z = it == d.sites.end() ? 0 : size_t(it - d.sites.begin());
    for (size_t r = 0; r < d.sites.size(); ++r) d.raw.push_back(e2.raw[r] - e1.raw[r]);
    const double base = d.raw[z];
    for (double& v : d.raw) v -= base;
    for (double v : d.raw) d.values.push_back(v / params.value_scale());
    for (size_t r = 1; r < d.values.size(); ++r)
        if (d.values[r] < d.values[r - 1] - eps_mono) ++d.monotone_violations;
    return d;
}

DifferenceProfile difference_profile(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi2,
                                     double t, double a, double b, double step, const std::vector<double>& depths,
                                     double eps_mono, const FarFieldSource& source) {
    const double anchor = std::clamp(0.0, a, b);
    auto e1 = busemann_profile(env, params, xi1, t, a, b, step, depths, anchor, 1e-9, source);
    auto e2 = busemann_profile(env, params, xi2, t, a, b, step, depths, anchor, 1e-9, source);
    return difference_profile(e1, e2, params, eps_mono);
}

JumpReport jump_directions(const EnvironmentSpec& env, const ScalingParams& params, const LatticePoint& p,
                           const LatticePoint& q, double xi_lo, double xi_hi, double resolution, double depth) {
    if (p.level() != q.level()) throw GeometryError("jump_directions: p and q must share a level");
    if (!(xi_lo < xi_hi) || !(resolution > 0)) throw GeometryError("jump_directions: bad interval");
    JumpReport rep;
    FieldLayout layout;
    layout.add_level(p.level(), std::min(p.offset(), q.offset()), std::max(p.offset(), q.offset()));
    auto delta = [&](double xi) {
        ++rep.evaluations;
        FarField f = far_field(env, params, xi, depth, layout);
        return f.value(q.level(), q.offset()) - f.value(p.level(), p.offset());
    };
    const double tol = 10.0 * 1e-9 * params.value_scale();
    // Delta is monotone in xi, so equal end values mean no jump inside.
    struct Frame {
        double lo, hi, dlo, dhi;
    };
    std::vector<Frame> stack{{xi_lo, xi_hi, delta(xi_lo), delta(xi_hi)}};
    std::vector<std::tuple<double, double, double>> found;
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (std::abs(f.dhi - f.dlo) <= tol) continue;
        if (f.hi - f.lo <= resolution) {
            found.emplace_back(0.5 * (f.lo + f.hi), f.dlo, f.dhi);
            continue;
        }
        double mid = 0.5 * (f.lo + f.hi), dm = delta(mid);
        stack.push_back({f.lo, mid, f.dlo, dm});
        stack.push_back({mid, f.hi, dm, f.dhi});
    }
    std::sort(found.begin(), found.end());
    for (auto& [xi, l, r] : found) {
        rep.directions.push_back(xi);
        rep.left_values.push_back(l / params.value_scale());
        rep.right_values.push_back(r / params.value_scale());
    }
    return rep;
}

BurkeReport stationary_boundary_check(uint64_t seed, double rho, int64_t m, int64_t k) {
    if (!(rho > 0.0 && rho < 1.0)) throw GeometryError("stationary_boundary_check: rho must lie in (0,1)");
    const EnvironmentSpec bulk{seed, 1.0};
    const EnvironmentSpec horiz{seed ^ 0x5bd1e9955bd1e995ULL, rho};
    const EnvironmentSpec vert{seed ^ 0x27d4eb2f165667c5ULL, 1.0 - rho};
    const int64_t W = m + 1;
    std::vector<double> row(static_cast<size_t>(W)), w(static_cast<size_t>(W));
    row[0] = 0.0;
    weight_row(horiz, 1, 0, m, w.data());
    for (int64_t i = 1; i < W; ++i) row[size_t(i)] = row[size_t(i - 1)] + w[size_t(i - 1)];
    for (int64_t j = 1; j <= k; ++j) {
        row[0] += weight(vert, {0, j});
        weight_row(bulk, 1, j, m, w.data());
        for (int64_t i = 1; i < W; ++i) row[size_t(i)] = w[size_t(i - 1)] + std::max(row[size_t(i - 1)], row[size_t(i)]);
    }
    BurkeReport rep;
    rep.rho = rho;
    rep.samples = m;
    rep.increments.resize(size_t(m));
    for (int64_t i = 0; i < m; ++i) rep.increments[size_t(i)] = row[size_t(i + 1)] - row[size_t(i)];
    auto ks = stats::ks_test(rep.increments, [rho](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-rho * x); });
    rep.ks_statistic = ks.statistic;
    rep.ks_p_value = ks.p_value;
    rep.lag1 = stats::lag1_correlation(rep.increments);
    rep.mean = stats::mean(rep.increments);
    return rep;
}

}  // namespace kpzlab
