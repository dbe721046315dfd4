#include "kpzlab/kpz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace kpzlab {

std::string Profile::to_csv() const {
    std::string s = "x,value\n";
    char buf[80];
    for (size_t k = 0; k < x.size(); ++k) {
        if (values[k] == kNegInf) std::snprintf(buf, sizeof buf, "%.10g,-inf\n", x[k]);
        else std::snprintf(buf, sizeof buf, "%.10g,%.17g\n", x[k], values[k]);
        s += buf;
    }
    return s;
}

Profile Profile::subsample(const ScalingParams& params, double h) const {
    if (h <= 0.0 || sites.empty()) return *this;
    Profile p;
    p.t = t;
    p.level = level;
    auto grid = grid_sites(params, level, x.front(), x.back(), h);
    size_t r = 0;
    for (int64_t m : grid) {
        while (r < sites.size() && sites[r] < m) ++r;
        if (r == sites.size()) break;
        if (sites[r] != m) continue;
        p.sites.push_back(m);
        p.x.push_back(x[r]);
        p.values.push_back(values[r]);
    }
    return p;
}

InitialCondition InitialCondition::narrow_wedge(const ScalingParams& params, double s, double z0) {
    InitialCondition f;
    f.kind = Kind::NarrowWedge;
    f.level = level_of(params, s);
    f.x0 = z0;
    f.site0 = site_of(params, f.level, z0);
    f.m_lo = f.site0;
    f.raw_values = {0.0};
    return f;
}

InitialCondition InitialCondition::flat(const ScalingParams& params, double s) {
    InitialCondition f;
    f.kind = Kind::Flat;
    f.level = level_of(params, s);
    return f;
}

InitialCondition InitialCondition::linear(const ScalingParams& params, double s, double sigma) {
    InitialCondition f;
    f.kind = Kind::Linear;
    f.level = level_of(params, s);
    f.slope = sigma;
    f.growth = std::abs(sigma);
    return f;
}

InitialCondition InitialCondition::sampled(const ScalingParams& params, const Profile& profile) {
    if (profile.sites.empty()) throw GeometryError("sampled initial condition: empty profile");
    InitialCondition f;
    f.kind = Kind::Sampled;
    f.level = profile.level;
    f.m_lo = profile.sites.front();
    f.raw_values.assign(size_t((profile.sites.back() - f.m_lo) / 2 + 1), kNegInf);
    for (size_t r = 0; r < profile.sites.size(); ++r)
        f.raw_values[size_t((profile.sites[r] - f.m_lo) / 2)] = profile.values[r] * params.value_scale();
    return f;
}

InitialCondition InitialCondition::sampled_raw(int64_t level, int64_t m_lo, std::vector<double> raw) {
    if (raw.empty()) throw GeometryError("sampled initial condition: empty profile");
    if (((m_lo - level) & 1) != 0) throw GeometryError("sampled initial condition: parity");
    InitialCondition f;
    f.kind = Kind::Sampled;
    f.level = level;
    f.m_lo = m_lo;
    f.raw_values = std::move(raw);
    return f;
}

InitialCondition InitialCondition::stationary(const ScalingParams& params, double s, double xi, uint64_t seed,
                                              double x_lo, double x_hi) {
    if (!(x_lo < 0.0 && x_hi > 0.0)) throw GeometryError("stationary initial condition: window must straddle 0");
    InitialCondition f;
    f.kind = Kind::Sampled;
    f.window_only = true;
    f.level = level_of(params, s);
    f.xi_ref = std::abs(xi);
    f.growth = 2.0 * std::abs(xi);
    const double eps = ScalingParams::c_x * xi / std::cbrt(double(params.n));
    if (!(std::abs(eps) < 1.0)) throw ConeError("stationary initial condition: direction outside the cone");
    const double a = std::sqrt(1.0 - eps) / (std::sqrt(1.0 - eps) + std::sqrt(1.0 + eps));
    const EnvironmentSpec h{seed ^ 0x9e3779b97f4a7c15ULL, a}, v{seed ^ 0xc2b2ae3d27d4eb4fULL, 1.0 - a};
    const int64_t lo = site_of(params, f.level, x_lo), hi = site_of(params, f.level, x_hi);
    const int64_t zero = site_of(params, f.level, 0.0);
    f.m_lo = lo;
    f.raw_values.assign(size_t((hi - lo) / 2 + 1), 0.0);
    const size_t z = size_t((zero - lo) / 2);
    auto step = [&](int64_t m) { return weight(h, {m, f.level}) - weight(v, {m, f.level}); };
    for (size_t r = z + 1; r < f.raw_values.size(); ++r) f.raw_values[r] = f.raw_values[r - 1] + step(lo + 2 * int64_t(r - 1));
    for (size_t r = z; r-- > 0;) f.raw_values[r] = f.raw_values[r + 1] - step(lo + 2 * int64_t(r));
    return f;
}

InitialCondition InitialCondition::mixed_busemann_cut(const BusemannField& w1, const BusemannField& w2, int64_t level,
                                                      int64_t cut, double theta) {
    const Slice* a = w1.deepest().find(level);
    const Slice* b = w2.deepest().find(level);
    if (!a || !b) throw WindowOverflow("mixed Busemann initial condition: level not recorded");
    const int64_t lo = std::max(a->m_lo, b->m_lo), hi = std::min(a->m_hi(), b->m_hi());
    const int64_t p = ((cut - level) & 1) == 0 ? cut : cut - 1;
    if (p < lo || p + 2 > hi) throw WindowOverflow("mixed Busemann initial condition: anchor outside the recorded window");
    InitialCondition f;
    f.kind = Kind::MixedBusemann;
    f.level = level;
    f.site0 = cut;
    f.theta = theta;
    f.xi1 = w1.xi;
    f.xi2 = w2.xi;
    f.xi_ref = std::max(std::abs(w1.xi), std::abs(w2.xi));
    f.growth = 2.0 * f.xi_ref;
    f.m_lo = lo;
    const double a0 = a->at(p);
    for (int64_t m = lo; m <= hi; m += 2) f.raw_values.push_back(m <= p ? a->at(m) - a0 : b->at(m) - a0 - theta);
    return f;
}

InitialCondition InitialCondition::mixed_busemann_at(const BusemannField& w1, const BusemannField& w2, int64_t level,
                                                     int64_t site0) {
    const Slice* a = w1.deepest().find(level);
    const Slice* b = w2.deepest().find(level);
    if (!a || !b) throw WindowOverflow("mixed Busemann initial condition: level not recorded");
    if (((site0 - level) & 1) != 0 || !a->contains(site0) || !b->contains(site0))
        throw WindowOverflow("mixed Busemann initial condition: anchor outside the recorded window");
    return mixed_busemann_cut(w1, w2, level, site0, b->at(site0) - a->at(site0));
}

InitialCondition InitialCondition::mixed_busemann(const ScalingParams& params, const BusemannField& w1,
                                                  const BusemannField& w2, double s, double x0) {
    const int64_t level = level_of(params, s);
    auto f = mixed_busemann_at(w1, w2, level, site_of(params, level, x0));
    f.x0 = x0;
    return f;
}

double InitialCondition::raw(const ScalingParams& params, int64_t m) const {
    switch (kind) {
        case Kind::Flat: return 0.0;
        case Kind::Linear: return slope * position_of(params, m) * params.value_scale();
        default: break;
    }
    if (m < m_lo || m > m_hi()) {
        if (truncated()) throw WindowOverflow("initial condition: site outside the recorded window");
        return kNegInf;
    }
    return raw_values[size_t((m - m_lo) / 2)];
}

InitialCondition InitialCondition::shifted(double c) const {
    InitialCondition f = *this;
    f.shift += c;
    return f;
}

std::string InitialCondition::describe() const {
    static const char* names[] = {"narrow-wedge", "flat", "linear", "sampled", "mixed-busemann"};
    nlohmann::json j{{"kind", names[int(kind)]}, {"level", level}, {"shift", shift}};
    switch (kind) {
        case Kind::NarrowWedge: j["z0"] = x0; j["site"] = site0; break;
        case Kind::Linear: j["sigma"] = slope; break;
        case Kind::Sampled: j["m_lo"] = m_lo; j["sites"] = raw_values.size(); break;
        case Kind::MixedBusemann:
            j["xi1"] = xi1;
            j["xi2"] = xi2;
            j["x0"] = x0;
            j["site"] = site0;
            j["theta"] = theta;
            break;
        default: break;
    }
    return j.dump();
}

Profile Evolution::profile(const ScalingParams& params) const {
    Profile p;
    p.t = t;
    p.level = level;
    p.sites = sites;
    p.values = values;
    for (int64_t m : sites) p.x.push_back(position_of(params, m));
    return p;
}

double search_radius(const InitialCondition& f, double dt, double safety) {
    return 2.0 * (std::abs(f.slope) + 2.0 * std::abs(f.xi_ref)) * dt + 4.0 * std::pow(dt, 2.0 / 3.0) * safety;
}

namespace {

// Source-level search window for outputs spanning [o_lo, o_hi] at `top`.
struct Search {
    int64_t lo = 0, hi = 0;
    int64_t cone_lo = 0, cone_hi = 0;  // every site reachable from the outputs
    int64_t supp_lo = 0, supp_hi = 0;  // where the initial condition may be finite
    bool known_lo = true, known_hi = true;
};

constexpr int64_t kFar = int64_t(1) << 60;

Search make_search(const ScalingParams& params, const InitialCondition& f, int64_t o_lo, int64_t o_hi, int64_t top,
                   double kappa) {
    Search s;
    const int64_t dk = top - f.level;
    s.cone_lo = o_lo - dk;
    s.cone_hi = o_hi + dk;
    s.supp_lo = -kFar;
    s.supp_hi = kFar;
    if (!f.unbounded()) {
        s.supp_lo = f.m_lo;
        s.supp_hi = f.m_hi();
    }
    const int64_t reach = int64_t(std::ceil(2.0 * kappa * params.space_unit()));
    s.lo = std::max({o_lo - reach, s.cone_lo, s.supp_lo});
    s.hi = std::min({o_hi + reach, s.cone_hi, s.supp_hi});
    Window w = window_on_level(f.level, s.lo, s.hi);
    s.lo = w.m_lo;
    s.hi = w.m_hi;
    return s;
}

// Whether an exit at the search edge could hide a better maximizer outside.
bool open_below(const Search& s, const InitialCondition& f) {
    return s.lo > s.cone_lo && (f.unbounded() || f.truncated() || s.lo > s.supp_lo);
}
bool open_above(const Search& s, const InitialCondition& f) {
    return s.hi < s.cone_hi && (f.unbounded() || f.truncated() || s.hi < s.supp_hi);
}

// A truncated initial condition cannot be widened past its recorded window.
bool at_truncation(const Search& s, const InitialCondition& f, bool below) {
    if (!f.truncated()) return false;
    return below ? s.lo <= f.m_lo : s.hi >= f.m_hi();
}

void check_levels(const InitialCondition& f, int64_t level) {
    if (level <= f.level) throw OrderError("evolve: target level must lie above the initial level");
}

}  // namespace

Evolution evolve_sites(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                       int64_t level, int64_t m_lo, int64_t m_hi, const EvolveOptions& opt) {
    check_levels(f, level);
    Window out_w = window_on_level(level, m_lo, m_hi);
    if (out_w.m_lo > out_w.m_hi) throw GeometryError("evolve: empty output window");
    const double dt = time_of(params, level) - time_of(params, f.level);
    double kappa = search_radius(f, dt, opt.safety);
    for (int round = 0;; ++round) {
        Search s = make_search(params, f, out_w.m_lo, out_w.m_hi, level, kappa);
        if (s.lo > s.hi) {
            // No source site can reach the output: everything is -inf.
            Evolution e;
            e.source_level = f.level;
            e.level = level;
            e.t = time_of(params, level);
            for (int64_t m = out_w.m_lo; m <= out_w.m_hi; m += 2) {
                e.sites.push_back(m);
                e.raw.push_back(kNegInf);
                e.values.push_back(kNegInf);
                e.chi_left.push_back(kNoExit);
                e.chi_right.push_back(kNoExit);
            }
            return e;
        }
        check_cap((s.hi - s.lo) / 2 + 1 + (level - f.level) * ((s.hi - s.lo) / 2 + 1), "evolve");
        SweepSpec spec;
        spec.source_level = f.level;
        spec.source_m_lo = s.lo;
        std::vector<double> bnd;
        bnd.reserve(size_t((s.hi - s.lo) / 2 + 1));
        for (int64_t m = s.lo; m <= s.hi; m += 2) bnd.push_back(f.raw(params, m));
        spec.boundary = {std::move(bnd)};
        spec.record = {out_w};
        spec.exits = true;
        auto out = sweep(env, spec);
        const Slice& sl = out.channels[0][0];

        bool touch_lo = false, touch_hi = false;
        for (int64_t r = 0; r < sl.size(); ++r) {
            if (sl.exit_left[size_t(r)] == kNoExit) continue;
            touch_lo |= sl.exit_left[size_t(r)] <= s.lo;
            touch_hi |= sl.exit_right[size_t(r)] >= s.hi;
        }
        const bool bad_lo = touch_lo && open_below(s, f), bad_hi = touch_hi && open_above(s, f);
        if (bad_lo || bad_hi) {
            if ((bad_lo && at_truncation(s, f, true)) || (bad_hi && at_truncation(s, f, false)))
                throw WindowOverflow("evolve: maximizer reaches the edge of the recorded initial condition");
            if (round >= opt.max_widenings) throw WindowOverflow("evolve: search window widening limit reached");
            kappa *= 2.0;
            continue;
        }

        Evolution e;
        e.source_level = f.level;
        e.level = level;
        e.t = time_of(params, level);
        e.search_lo = s.lo;
        e.search_hi = s.hi;
        e.widenings = round;
        const int64_t gap = level - f.level;
        for (int64_t r = 0; r < sl.size(); ++r) {
            const double v = sl.value[size_t(r)];
            e.sites.push_back(sl.m_lo + 2 * r);
            e.raw.push_back(v);
            e.values.push_back(v == kNegInf ? kNegInf : scaled_from_raw(params, v, gap) + f.shift);
            e.chi_left.push_back(sl.exit_left[size_t(r)]);
            e.chi_right.push_back(sl.exit_right[size_t(r)]);
        }
        return e;
    }
}

Evolution evolve(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f, double t,
                 double a, double b, const EvolveOptions& opt) {
    if (b < a) throw GeometryError("evolve: empty output window");
    const int64_t level = level_of(params, t);
    return evolve_sites(env, params, f, level, site_of(params, level, a), site_of(params, level, b), opt);
}

SplitEvolution split_evolve(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                            int64_t site0, const std::vector<Window>& outputs, const EvolveOptions& opt) {
    if (outputs.empty()) throw GeometryError("split_evolve: no output windows");
    int64_t top = outputs.front().level;
    int64_t o_lo = kFar, o_hi = -kFar;
    std::vector<Window> rec;
    for (const auto& w0 : outputs) {
        check_levels(f, w0.level);
        Window w = window_on_level(w0.level, w0.m_lo, w0.m_hi);
        if (w.m_lo > w.m_hi) throw GeometryError("split_evolve: empty output window");
        rec.push_back(w);
        top = std::max(top, w.level);
        o_lo = std::min(o_lo, w.m_lo);
        o_hi = std::max(o_hi, w.m_hi);
    }
    // The split position may sit between two sites: the left half takes sites <= site0,
    // the right half sites >= site0.
    const double dt = time_of(params, top) - time_of(params, f.level);
    double kappa = search_radius(f, dt, opt.safety);
    for (int round = 0;; ++round) {
        Search s = make_search(params, f, o_lo, o_hi, top, kappa);
        // Keep both halves represented.
        if (s.lo > site0 || s.hi < site0) throw WindowOverflow("split_evolve: split point outside the search window");
        check_cap((top - f.level) * ((s.hi - s.lo) / 2 + 1) * 2, "split_evolve");
        SweepSpec spec;
        spec.source_level = f.level;
        spec.source_m_lo = s.lo;
        std::vector<double> left, right;
        for (int64_t m = s.lo; m <= s.hi; m += 2) {
            double v = f.raw(params, m);
            left.push_back(m <= site0 ? v : kNegInf);
            right.push_back(m >= site0 ? v : kNegInf);
        }
        spec.boundary = {std::move(right), std::move(left)};
        spec.record = rec;
        spec.exits = true;
        auto out = sweep(env, spec);

        // Per-window cone limits decide whether an edge exit matters.
        bool bad_lo = false, bad_hi = false;
        for (size_t c = 0; c < 2; ++c)
            for (size_t wi = 0; wi < rec.size(); ++wi) {
                const Slice& sl = out.channels[c][wi];
                const int64_t dk = rec[wi].level - f.level;
                const bool lo_open = open_below(s, f) && s.lo > rec[wi].m_lo - dk && !(c == 0 && s.lo >= site0);
                const bool hi_open = open_above(s, f) && s.hi < rec[wi].m_hi + dk && !(c == 1 && s.hi <= site0);
                for (int64_t r = 0; r < sl.size(); ++r) {
                    if (sl.exit_left[size_t(r)] == kNoExit) continue;
                    bad_lo |= lo_open && sl.exit_left[size_t(r)] <= s.lo;
                    bad_hi |= hi_open && sl.exit_right[size_t(r)] >= s.hi;
                }
            }
        if (bad_lo || bad_hi) {
            if ((bad_lo && at_truncation(s, f, true)) || (bad_hi && at_truncation(s, f, false)))
                throw WindowOverflow("split_evolve: maximizer reaches the edge of the recorded initial condition");
            if (round >= opt.max_widenings) throw WindowOverflow("split_evolve: search window widening limit reached");
            kappa *= 2.0;
            continue;
        }
        SplitEvolution e;
        e.source_level = f.level;
        e.site0 = site0;
        e.right = std::move(out.channels[0]);
        e.left = std::move(out.channels[1]);
        e.search_lo = s.lo;
        e.search_hi = s.hi;
        e.widenings = round;
        return e;
    }
}

double d_function(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f, double x0,
                  double x, double t) {
    const int64_t level = level_of(params, t);
    const int64_t m = site_of(params, level, x);
    auto e = split_evolve(env, params, f, site_of(params, f.level, x0), {{level, m, m}});
    return (e.right[0].value[0] - e.left[0].value[0]) / params.value_scale();
}

std::pair<double, double> exit_points(const EnvironmentSpec& env, const ScalingParams& params,
                                      const InitialCondition& f, double x, double t) {
    const int64_t level = level_of(params, t);
    const int64_t m = site_of(params, level, x);
    auto e = evolve_sites(env, params, f, level, m, m);
    if (e.chi_left[0] == kNoExit) throw WindowOverflow("exit_points: output unreachable from the initial condition");
    return {position_of(params, e.chi_left[0]), position_of(params, e.chi_right[0])};
}

}  // namespace kpzlab
