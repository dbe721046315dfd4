#include "kpzlab/eternal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace kpzlab {

const Slice* EternalApprox::find(int64_t level) const {
    for (const auto& s : b)
        if (s.level == level) return &s;
    return nullptr;
}

double EternalApprox::raw(int64_t level, int64_t m) const {
    const Slice* s = find(level);
    if (!s || !s->contains(m)) throw WindowOverflow("eternal field: site outside the stitched window");
    return s->value[size_t(s->index(m))];
}

double EternalApprox::scaled(const ScalingParams& params, int64_t level, int64_t m) const {
    return raw(level, m) / params.value_scale();
}

std::vector<int64_t> EternalApprox::levels() const {
    std::vector<int64_t> out;
    for (const auto& s : b) out.push_back(s.level);
    return out;
}

InitialCondition EternalApprox::at_level(int64_t level) const {
    const Slice* s = find(level);
    if (!s) throw WindowOverflow("eternal field: level not stitched");
    auto f = InitialCondition::sampled_raw(level, s->m_lo, s->value);
    f.window_only = true;
    f.xi1 = xi1;
    f.xi2 = xi2;
    f.xi_ref = std::max(std::abs(xi1), std::abs(xi2));
    f.growth = 2.0 * f.xi_ref;
    return f;
}

EternalApprox EternalApprox::shifted(double c) const {
    EternalApprox e = *this;
    for (auto& s : e.b)
        for (auto& v : s.value) v += c;
    return e;
}

EternalApprox EternalApprox::spiked(int64_t level, int64_t m, double delta) const {
    EternalApprox e = *this;
    for (auto& s : e.b)
        if (s.level == level && s.contains(m)) s.value[size_t(s.index(m))] += delta;
    return e;
}

std::string EternalApprox::to_csv(const ScalingParams& params) const {
    std::ostringstream os;
    os.precision(12);
    os << "t,x,b\n";
    for (const auto& s : b)
        for (int64_t r = 0; r < s.size(); ++r)
            os << time_of(params, s.level) << ',' << position_of(params, s.m_lo + 2 * r) << ','
               << s.value[size_t(r)] / params.value_scale() << '\n';
    return os.str();
}

namespace {

double trace_theta(const MixedSetup& setup, const InterfaceTrace& tr) {
    if (!tr.initial.empty()) {
        auto j = nlohmann::json::parse(tr.initial, nullptr, false);
        if (j.is_object() && j.contains("theta")) return j["theta"].get<double>();
    }
    const int64_t p = ((tr.start_m - tr.start_level) & 1) == 0 ? tr.start_m : tr.start_m - 1;
    return setup.w2.deepest().value(tr.start_level, p) - setup.w1.deepest().value(tr.start_level, p);
}

bool left_of(const Position& tau, int64_t m) {
    return tau.tag() == Position::Tag::PlusInf || (tau.finite() && m < tau.m());
}

bool right_of(const Position& tau, int64_t m) {
    return tau.tag() == Position::Tag::MinusInf || (tau.finite() && m > tau.m());
}

}  // namespace

EternalApprox stitch(const ScalingParams& params, const MixedSetup& setup, const InterfaceTrace& trace, double eps_mv) {
    const FarField& a = setup.w1.deepest();
    const FarField& bb = setup.w2.deepest();
    EternalApprox e;
    e.xi1 = setup.xi1;
    e.xi2 = setup.xi2;
    e.trace = trace;
    e.theta = trace_theta(setup, trace);
    e.anchor_level = trace.start_level;
    e.anchor_m = ((trace.start_m - trace.start_level) & 1) == 0 ? trace.start_m : trace.start_m - 1;
    bool all_minus = true, all_plus = true;
    for (size_t k = 1; k < trace.size(); ++k) {
        all_minus &= trace.minus[k].tag() == Position::Tag::MinusInf && trace.plus[k].tag() == Position::Tag::MinusInf;
        all_plus &= trace.minus[k].tag() == Position::Tag::PlusInf && trace.plus[k].tag() == Position::Tag::PlusInf;
    }
    if (trace.size() > 1 && all_minus) e.kind = EternalApprox::Kind::PureW2;
    if (trace.size() > 1 && all_plus) e.kind = EternalApprox::Kind::PureW1;
    const double a0 = a.value(e.anchor_level, e.anchor_m);
    for (size_t k = 0; k < trace.size(); ++k) {
        const int64_t level = trace.levels[k];
        const Slice* sa = a.find(level);
        const Slice* sb = bb.find(level);
        if (!sa || !sb) throw WindowOverflow("stitch: trace level not recorded by the fields");
        const int64_t lo = std::max(sa->m_lo, sb->m_lo), hi = std::min(sa->m_hi(), sb->m_hi());
        const double lift = 2.0 * double(level - e.anchor_level);
        Slice s;
        s.level = level;
        s.m_lo = lo;
        for (int64_t m = lo; m <= hi; m += 2) {
            const double w1 = sa->at(m) - a0 - lift;
            const double w2 = sb->at(m) - a0 - e.theta - lift;
            if (left_of(trace.minus[k], m)) {
                s.value.push_back(w1);
            } else if (right_of(trace.plus[k], m)) {
                s.value.push_back(w2);
            } else {
                const double gap = std::abs(w2 - w1) / params.value_scale();
                e.seam_mismatch = std::max(e.seam_mismatch, gap);
                if (gap >= eps_mv) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "stitch: seam mismatch %.3g at t=%.4g x=%.6g", gap,
                                  time_of(params, level), position_of(params, m));
                    throw SeamViolation(buf);
                }
                s.value.push_back(w1);
            }
        }
        e.b.push_back(std::move(s));
    }
    return e;
}

EternalApprox pure_busemann(const MixedSetup& setup, bool second, int64_t level, int64_t anchor_m) {
    const FarField& f = second ? setup.w2.deepest() : setup.w1.deepest();
    EternalApprox e;
    e.kind = second ? EternalApprox::Kind::PureW2 : EternalApprox::Kind::PureW1;
    e.xi1 = setup.xi1;
    e.xi2 = setup.xi2;
    e.anchor_level = level;
    e.anchor_m = anchor_m;
    const double f0 = f.value(level, anchor_m);
    const Position sentinel = second ? Position::minus_inf() : Position::plus_inf();
    e.trace.start_level = level;
    e.trace.start_m = anchor_m;
    for (const auto& s : f.slices) {
        if (s.level < level || std::find(setup.levels.begin(), setup.levels.end(), s.level) == setup.levels.end())
            continue;
        Slice out;
        out.level = s.level;
        out.m_lo = s.m_lo;
        for (double v : s.value) out.value.push_back(v - f0 - 2.0 * double(s.level - level));
        e.b.push_back(std::move(out));
        e.trace.levels.push_back(s.level);
        e.trace.minus.push_back(sentinel);
        e.trace.plus.push_back(sentinel);
    }
    return e;
}

ResidualReport evolution_residual(const EnvironmentSpec& env, const ScalingParams& params, const EternalApprox& b,
                                  int64_t level_s, int64_t level_t) {
    if (level_t <= level_s) throw OrderError("evolution_residual: need s < t");
    const Slice* st = b.find(level_t);
    if (!st) throw WindowOverflow("evolution_residual: level not stitched");
    const InitialCondition f = b.at_level(level_s);
    // Shrink the output window toward its centre until every maximizer is inside the source window.
    const int64_t centre = st->m_lo + 2 * ((st->size() - 1) / 2);
    int64_t half = (st->m_hi() - st->m_lo) / 2;
    for (int attempt = 0; attempt < 12; ++attempt, half = half * 3 / 4) {
        const int64_t lo = std::max(st->m_lo, centre - half), hi = std::min(st->m_hi(), centre + half);
        Evolution ev;
        try {
            ev = evolve_sites(env, params, f, level_t, lo, hi);
        } catch (const WindowOverflow&) {
            continue;
        }
        ResidualReport rep;
        rep.m_lo = ev.sites.front();
        rep.m_hi = ev.sites.back();
        const double lift = 2.0 * double(level_t - level_s);
        for (size_t i = 0; i < ev.sites.size(); ++i) {
            const double r = std::abs(st->at(ev.sites[i]) - (ev.raw[i] - lift)) / params.value_scale();
            if (r > rep.residual || i == 0) {
                rep.residual = std::max(rep.residual, r);
                rep.worst_m = ev.sites[i];
            }
        }
        return rep;
    }
    throw WindowOverflow("evolution_residual: no certified output window");
}

Cutoffs cutoff_tau_b(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                     const EternalApprox& b, int64_t level_t, int64_t m_lo, int64_t m_hi, int64_t level) {
    const FarField& a = setup.w1.deepest();
    const FarField& bb = setup.w2.deepest();
    if (a.moves.empty() || bb.moves.empty()) throw GeometryError("cutoff_tau_b: setup recorded without moves");
    auto ev = evolve_sites(env, params, b.at_level(level), level_t, m_lo, m_hi);
    const auto& lv = b.trace.levels;
    const auto it = std::find(lv.begin(), lv.end(), level);
    if (it == lv.end()) throw GeometryError("cutoff_tau_b: level not on the trace");
    const size_t k = size_t(it - lv.begin());
    Cutoffs c;
    c.roots = ev.sites;
    for (size_t i = 0; i < ev.sites.size(); ++i) {
        const int64_t m = ev.sites[i];
        const int64_t g1 = a.moves.backtrack(level_t, m, level, Side::Left).back();
        const int64_t g2 = bb.moves.backtrack(level_t, m, level, Side::Right).back();
        // A geodesic follows a ray when it exits into that field's part of b along the ray.
        c.follows1.push_back(ev.chi_left[i] == g1 && !right_of(b.trace.plus[k], g1));
        c.follows2.push_back(ev.chi_right[i] == g2 && !left_of(b.trace.minus[k], g2));
        if (!c.follows1.back() && !c.follows2.back()) ++c.ambiguous;
    }
    const size_t n = c.roots.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        if (c.follows2[i] && !c.follows2[i + 1]) ++c.monotone_violations;
        if (!c.follows1[i] && c.follows1[i + 1]) ++c.monotone_violations;
    }
    std::optional<size_t> r0, l0;
    for (size_t i = 0; i < n && !r0; ++i)
        if (c.follows2[i]) r0 = i;
    for (size_t i = n; i-- > 0 && !l0;)
        if (c.follows1[i]) l0 = i;
    c.r = !r0 ? Position::plus_inf() : (*r0 == 0 ? Position::minus_inf() : Position::at(c.roots[*r0]));
    c.l = !l0 ? Position::minus_inf() : (*l0 + 1 == n ? Position::plus_inf() : Position::at(c.roots[*l0]));
    // Neighbouring sites split between the two rays: both cutoffs sit on the gap.
    if (r0 && l0 && *r0 == *l0 + 1 && *r0 > 0 && *l0 + 1 < n) c.r = c.l = Position::at(c.roots[*l0] + 1);
    return c;
}

bool is_interval_of_D(const MixedSetup& setup, int64_t level, const Cutoffs& c, double tol) {
    if (!c.r.finite() || !c.l.finite()) return false;
    const FarField& a = setup.w1.deepest();
    const FarField& bb = setup.w2.deepest();
    auto D = [&](int64_t m) { return bb.value(level, m) - a.value(level, m); };
    int64_t r = c.r.m(), l = c.l.m();
    if (((r - level) & 1) != 0) return r == l && D(r + 1) - D(r - 1) > tol;
    if (l < r) return false;
    for (int64_t m = r; m < l; m += 2)
        if (std::abs(D(m + 2) - D(m)) > tol) return false;
    return D(r) - D(r - 2) > tol && D(l + 2) - D(l) > tol;
}

bool DecayTable::decayed(double factor) const {
    if (rows.size() < 2) return false;
    return rows.back().sup_diff == 0.0 || rows.back().sup_diff < factor * rows.front().sup_diff;
}

std::string DecayTable::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "s,sup_diff,coalesced\n";
    for (const auto& r : rows) os << r.s << ',' << r.sup_diff << ',' << (r.coalesced ? 1 : 0) << '\n';
    return os.str();
}

DecayRow decay_row(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f1,
                   const InitialCondition& f2, double t, double a, double b, double anchor) {
    if (f1.level != f2.level) throw GeometryError("decay_row: initial conditions on different levels");
    auto e1 = evolve(env, params, f1, t, a, b);
    auto e2 = evolve(env, params, f2, t, a, b);
    if (e1.sites != e2.sites) throw GeometryError("decay_row: output grids differ");
    const int64_t am = site_of(params, e1.level, anchor);
    const size_t ai = size_t(std::find(e1.sites.begin(), e1.sites.end(), am) - e1.sites.begin());
    if (ai == e1.sites.size()) throw GeometryError("decay_row: anchor outside the window");
    DecayRow row;
    row.s = time_of(params, f1.level);
    row.level = f1.level;
    for (size_t i = 0; i < e1.sites.size(); ++i) {
        const double d = (e1.raw[i] - e1.raw[ai]) - (e2.raw[i] - e2.raw[ai]);
        row.sup_diff = std::max(row.sup_diff, std::abs(d) / params.value_scale());
    }
    row.coalesced = row.sup_diff == 0.0;
    return row;
}

DecayTable one_force_one_solution(const EnvironmentSpec& env, const ScalingParams& params, const ConditionAt& f1,
                                  const ConditionAt& f2, const std::vector<double>& starts, double t, double a,
                                  double b, double anchor) {
    DecayTable tab;
    tab.anchor = anchor;
    for (double s : starts) tab.rows.push_back(decay_row(env, params, f1(s), f2(s), t, a, b, anchor));
    return tab;
}

int64_t SandwichReport::violations() const {
    int64_t v = 0;
    for (const auto& r : rows) v += r.violations;
    return v;
}

std::string SandwichReport::to_json() const {
    nlohmann::json j;
    j["xi"] = xi;
    j["xi1"] = xi1;
    j["xi2"] = xi2;
    j["t"] = t;
    j["stabilized"] = stabilized;
    j["violations"] = violations();
    j["clusters"] = clusters;
    for (const auto& r : rows) j["rows"].push_back({{"depth", r.depth}, {"violations", r.violations}});
    return j.dump(2);
}

SandwichReport busemann_limit_forward(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi,
                                      double xi2, const std::vector<double>& sequence_depths, double t, double a,
                                      double b, double anchor, const std::vector<double>& bracket_depths,
                                      double cluster_tol) {
    SandwichReport rep;
    rep.xi = xi;
    rep.xi1 = xi1;
    rep.xi2 = xi2;
    rep.t = t;
    auto lo = busemann_profile(env, params, xi1, t, a, b, 0.0, bracket_depths, anchor);
    auto hi = busemann_profile(env, params, xi2, t, a, b, 0.0, bracket_depths, anchor);
    rep.sites = lo.sites;
    rep.stabilized = lo.stabilized && hi.stabilized;
    const double vs = params.value_scale();
    for (size_t i = 0; i < rep.sites.size(); ++i) {
        rep.lower.push_back(lo.raw[i] / vs);
        rep.upper.push_back(hi.raw[i] / vs);
    }
    const int64_t level = lo.level, am = lo.anchor_site;
    for (double R : sequence_depths) {
        FieldLayout layout;
        layout.add_level(level, rep.sites.front(), rep.sites.back());
        FarField f = far_field(env, params, xi, R, layout);
        SandwichRow row;
        row.depth = R;
        const double f0 = f.value(level, am);
        // Brackets from far points on the same level when the schedule has this depth.
        const auto same = std::find(lo.depths.begin(), lo.depths.end(), R);
        const std::vector<double>& lr = same == lo.depths.end() ? lo.raw : lo.per_depth[size_t(same - lo.depths.begin())];
        const std::vector<double>& hr = same == lo.depths.end() ? hi.raw : hi.per_depth[size_t(same - lo.depths.begin())];
        for (size_t i = 0; i < rep.sites.size(); ++i) {
            const int64_t m = rep.sites[i];
            const double p = f.value(level, m) - f0;
            row.profile.push_back(p / vs);
            // Increments to the right grow with the direction; to the left they shrink.
            const bool ok = m >= am ? (lr[i] <= p && p <= hr[i]) : (hr[i] <= p && p <= lr[i]);
            if (!ok) ++row.violations;
        }
        rep.rows.push_back(std::move(row));
    }
    for (size_t r = 0; r < rep.rows.size(); ++r) {
        bool placed = false;
        for (auto& c : rep.clusters) {
            const auto& p = rep.rows[c.front()].profile;
            double d = 0.0;
            for (size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - rep.rows[r].profile[i]));
            if (d <= cluster_tol) {
                c.push_back(r);
                placed = true;
                break;
            }
        }
        if (!placed) rep.clusters.push_back({r});
    }
    return rep;
}

bool SteeredResult::matched(double tol) const {
    if (steps.empty()) return false;
    const size_t from = steps.size() >= 2 ? steps.size() - 2 : 0;
    for (size_t k = from; k < steps.size(); ++k)
        if (!(steps[k].match < tol) || !steps[k].seam_at_z) return false;
    return true;
}

SteeredResult steered_sequence(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                               int64_t level, int64_t z, const std::vector<double>& depths, int64_t half_width,
                               int64_t probe) {
    const FarField& a = setup.w1.deepest();
    const FarField& bb = setup.w2.deepest();
    if (a.moves.empty() || bb.moves.empty()) throw GeometryError("steered_sequence: setup recorded without moves");
    if (probe <= 0) probe = std::max<int64_t>(1, (level - a.moves.base) / 2);
    const int64_t r = level - probe;
    // The gap next to z where D jumps; rays are taken from its two sites.
    auto D = [&](int64_t m) { return bb.value(level, m) - a.value(level, m); };
    const int64_t zl = D(z + 2) != D(z) ? z : z - 2, zr = zl + 2;
    if (D(zr) == D(zl)) throw SwitchNotFound("steered_sequence: D does not jump next to the point");
    const int64_t g1 = a.moves.backtrack(level, zl, r, Side::Left).back();
    const int64_t g2 = bb.moves.backtrack(level, zr, r, Side::Left).back();
    if (g1 >= g2) throw SwitchNotFound("steered_sequence: rays from the point do not separate above the probe level");

    SteeredResult res;
    res.level = level;
    res.z = z;
    res.m_lo = z - 2 * half_width;
    res.m_hi = z + 2 * half_width;
    const double vs = params.value_scale();
    for (double R : depths) {
        const int64_t lk = level_of(params, time_of(params, level) - R);
        const int64_t span = level - lk;
        // Positions at level r of the leftmost geodesics from (m, lk) into zl and zr.
        auto through = [&](int64_t m) {
            SweepSpec spec;
            spec.source_level = lk;
            spec.source_m_lo = m;
            spec.boundary = {{0.0}};
            spec.record = {Window{level, zl, zr}};
            spec.moves_from = lk;
            auto out = sweep(env, spec);
            return std::pair{out.moves.backtrack(level, zl, r, Side::Left).back(),
                             out.moves.backtrack(level, zr, r, Side::Left).back()};
        };
        int64_t lo = zl - span + 2, hi = zr + span - 2;
        if (((lo - lk) & 1) != 0) ++lo, --hi;
        const auto first = through(lo), last = through(hi);
        if (first.first > g1 || last.second < g2) throw SwitchNotFound("steered_sequence: no switch on the level");
        // Largest root whose geodesic into zl follows the xi1 ray.
        int64_t a_lo = lo, a_hi = hi;
        if (last.first <= g1) a_lo = hi;
        while (a_hi - a_lo > 2) {
            const int64_t mid = a_lo + 2 * ((a_hi - a_lo) / 4);
            if (through(mid).first <= g1) a_lo = mid;
            else a_hi = mid;
        }
        // Smallest root whose geodesic into zr follows the xi2 ray.
        int64_t b_lo = lo, b_hi = hi;
        if (first.second >= g2) b_hi = lo;
        while (b_hi - b_lo > 2) {
            const int64_t mid = b_lo + 2 * ((b_hi - b_lo) / 4);
            if (through(mid).second >= g2) b_hi = mid;
            else b_lo = mid;
        }
        auto evaluate = [&](int64_t root) {
            SteeredStep st;
            st.depth = R;
            st.level = lk;
            st.x = root;
            st.both = b_hi <= a_lo;
            SweepSpec spec;
            spec.source_level = lk;
            spec.source_m_lo = root;
            spec.boundary = {{0.0}};
            spec.record = {window_on_level(level, res.m_lo, res.m_hi)};
            auto out = sweep(env, spec);
            const Slice& sl = out.channels[0][0];
            auto p = [&](int64_t m) { return sl.at(m); };
            auto w1 = [&](int64_t m) { return a.value(level, m); };
            auto w2 = [&](int64_t m) { return bb.value(level, m); };
            // Best seam gap g: W1 increments left of g, W2 increments right of g, and a jump across g
            // that some theta between D(g - 1) and D(g + 1) produces.
            st.match = std::numeric_limits<double>::infinity();
            for (int64_t g = res.m_lo + 1; g < res.m_hi; g += 2) {
                double e = 0.0;
                for (int64_t m = res.m_lo; m < g; m += 2)
                    e = std::max(e, std::abs((p(m) - p(g - 1)) - (w1(m) - w1(g - 1))));
                for (int64_t m = g + 1; m <= res.m_hi; m += 2)
                    e = std::max(e, std::abs((p(m) - p(g + 1)) - (w2(m) - w2(g + 1))));
                const double jump = p(g + 1) - p(g - 1);
                e = std::max({e, w1(g + 1) - w1(g - 1) - jump, jump - (w2(g + 1) - w2(g - 1))});
                if (e / vs < st.match || (e / vs == st.match && std::abs(g - z) < std::abs(st.seam - z))) {
                    st.match = e / vs;
                    st.seam = g;
                }
            }
            // The seam bounds the run of constant D containing z.
            const int64_t near = st.seam > z ? st.seam - 1 : st.seam + 1;
            st.seam_at_z = true;
            for (int64_t m = std::min(z, near); m < std::max(z, near); m += 2) st.seam_at_z &= D(m) == D(m + 2);
            for (int64_t m = res.m_lo; m <= res.m_hi; m += 2) {
                const double q = p(m) - p(z);
                if (std::abs(q - (w1(m) - w1(z))) / vs > 1e-6) st.differs_from_w1 = true;
                if (std::abs(q - (w2(m) - w2(z))) / vs > 1e-6) st.differs_from_w2 = true;
            }
            return st;
        };
        // Candidates on either side of the switch: the last xi1 follower and the first xi2 follower.
        SteeredStep st = evaluate(a_lo);
        if (b_hi != a_lo) {
            SteeredStep alt = evaluate(b_hi);
            auto rank = [](const SteeredStep& x) { return std::pair{!x.seam_at_z, x.match}; };
            if (rank(alt) < rank(st)) st = alt;
        }
        res.steps.push_back(st);
    }
    return res;
}

DimensionEstimate dimension_estimate(const SplitSet& s, const std::vector<double>& h) {
    DimensionEstimate est;
    est.h = h;
    if (s.x.empty()) return est;
    const double x0 = s.x.front(), width = s.x.back() - s.x.front();
    bool full = true;
    std::vector<double> lx, ly;
    for (double hh : h) {
        std::map<int64_t, int> boxes;
        for (size_t i = 0; i < s.x.size(); ++i)
            if (s.is_L[i] || s.is_R[i]) boxes[int64_t(std::floor((s.x[i] - x0) / hh))] = 1;
        est.count.push_back(int64_t(boxes.size()));
        const int64_t total = int64_t(std::floor(width / hh)) + 1;
        full &= int64_t(boxes.size()) >= total;
        if (!boxes.empty()) {
            lx.push_back(std::log(1.0 / hh));
            ly.push_back(std::log(double(boxes.size())));
        }
    }
    est.saturated = full && !lx.empty();
    if (lx.size() >= 3) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
        mx /= double(lx.size());
        my /= double(lx.size());
        double sxy = 0, sxx = 0;
        for (size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
        if (sxx > 0) {
            est.slope = sxy / sxx;
            est.defined = true;
        }
    }
    return est;
}

}  // namespace kpzlab
