#include "kpzlab/interface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace kpzlab {

int64_t Position::m() const {
    if (tag_ != Tag::Finite) throw GeometryError("interface position: arithmetic on an infinite sentinel");
    return m_;
}

double Position::x(const ScalingParams& params) const { return position_of(params, m()); }

std::string Position::str() const {
    if (tag_ == Tag::MinusInf) return "-inf";
    if (tag_ == Tag::PlusInf) return "+inf";
    return std::to_string(m_);
}

bool Position::operator<(const Position& o) const {
    auto rank = [](Tag t) { return t == Tag::MinusInf ? 0 : t == Tag::Finite ? 1 : 2; };
    if (rank(tag_) != rank(o.tag_)) return rank(tag_) < rank(o.tag_);
    return tag_ == Tag::Finite && m_ < o.m_;
}

int64_t grid_site(const Position& p, int64_t level, bool up) {
    const int64_t m = p.m();
    if (((m - level) & 1) == 0) return m;
    return up ? m + 1 : m - 1;
}

bool same_cell(const Position& a, const Position& b) {
    if (a.finite() != b.finite()) return false;
    if (!a.finite()) return a.tag() == b.tag();
    return std::abs(a.m() - b.m()) <= 2;
}

int64_t InterfaceTrace::ordering_violations() const {
    int64_t v = 0;
    for (size_t k = 0; k < size(); ++k)
        if (plus[k] < minus[k]) ++v;
    return v;
}

std::string InterfaceTrace::to_csv(const ScalingParams& params) const {
    std::string s = "t,tau_minus,tau_plus,minus_sentinel,plus_sentinel\n";
    char buf[160];
    auto val = [&](const Position& p) { return p.finite() ? p.x(params) : 0.0; };
    for (size_t k = 0; k < size(); ++k) {
        std::string a = minus[k].finite() ? "" : minus[k].str(), b = plus[k].finite() ? "" : plus[k].str();
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%s,%s\n", times[k], val(minus[k]), val(plus[k]), a.c_str(),
                      b.c_str());
        s += buf;
    }
    return s;
}

std::pair<Position, Position> interface_positions(const DProfile& dp, double tol) {
    const int64_t n = int64_t(dp.d.size());
    auto sign = [&](int64_t r) {
        double v = dp.d[size_t(r)];
        return v > tol ? 1 : v < -tol ? -1 : 0;
    };
    std::vector<int64_t> idx;
    for (int64_t r = 0; r < n; ++r)
        if (!std::isnan(dp.d[size_t(r)])) idx.push_back(r);
    if (idx.empty()) return {Position::minus_inf(), Position::plus_inf()};
    auto site = [&](int64_t r) { return dp.m_lo + 2 * r; };

    Position lo, hi;
    auto a = std::find_if(idx.begin(), idx.end(), [&](int64_t r) { return sign(r) >= 0; });
    if (a == idx.end()) lo = Position::plus_inf();
    else if (a == idx.begin()) lo = Position::minus_inf();
    else lo = Position::at(sign(*a) == 0 ? site(*a) : site(*a) - 1);

    auto b = std::find_if(idx.rbegin(), idx.rend(), [&](int64_t r) { return sign(r) <= 0; });
    if (b == idx.rend()) hi = Position::minus_inf();
    else if (b == idx.rbegin()) hi = Position::plus_inf();
    else hi = Position::at(sign(*b) == 0 ? site(*b) : site(*b) + 1);
    return {lo, hi};
}

namespace {

double mean_direction(const InitialCondition& f) {
    if (f.kind == InitialCondition::Kind::Linear) return 0.5 * f.slope;
    return 0.5 * (f.xi1 + f.xi2);
}

double spread(const InitialCondition& f) { return std::abs(f.xi2 - f.xi1); }

// Half width of the window searched for the interface after time dt.
double output_half(double dxi, double dt) { return (0.5 * dxi + 0.25) * dt + 3.0 * std::pow(dt, 2.0 / 3.0) + 0.25; }

std::vector<DProfile> d_profiles(const SplitEvolution& e) {
    std::vector<DProfile> out;
    for (size_t w = 0; w < e.right.size(); ++w) {
        DProfile dp;
        dp.level = e.right[w].level;
        dp.m_lo = e.right[w].m_lo;
        for (int64_t r = 0; r < e.right[w].size(); ++r) {
            double a = e.right[w].value[size_t(r)], b = e.left[w].value[size_t(r)];
            dp.d.push_back(a == kNegInf && b == kNegInf ? std::numeric_limits<double>::quiet_NaN() : a - b);
            dp.h.push_back(std::max(a, b));
        }
        out.push_back(std::move(dp));
    }
    return out;
}

bool one_sided(const std::pair<Position, Position>& p) { return !p.first.finite() || !p.second.finite(); }

}  // namespace

InterfaceTrace interface(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                         int64_t split_m, const std::vector<int64_t>& levels, const InterfaceOptions& opt) {
    InterfaceTrace tr;
    tr.start_level = f.level;
    tr.start_m = split_m;
    tr.s = time_of(params, f.level);
    tr.x0 = position_of(params, split_m);
    tr.initial = f.describe();
    tr.levels.push_back(f.level);
    for (int64_t k : levels) {
        if (k < f.level) throw OrderError("interface: level below the initial condition");
        if (k > tr.levels.back()) tr.levels.push_back(k);
        else if (k != tr.levels.back()) throw OrderError("interface: levels must be ascending");
    }
    for (int64_t k : tr.levels) tr.times.push_back(time_of(params, k));
    tr.minus.assign(tr.levels.size(), Position::at(split_m));
    tr.plus.assign(tr.levels.size(), Position::at(split_m));
    if (tr.levels.size() == 1) return tr;

    const double xi = mean_direction(f), dxi = spread(f);
    const double tol = opt.eps_d * params.value_scale();
    std::vector<double> scale(tr.levels.size(), 1.0);
    std::vector<uint8_t> done(tr.levels.size(), 0);
    done[0] = 1;
    for (int attempt = 0; attempt <= opt.expansions; ++attempt) {
        std::vector<Window> outs;
        std::vector<size_t> which;
        for (size_t k = 1; k < tr.levels.size(); ++k) {
            if (done[k]) continue;
            const double dt = tr.times[k] - tr.s;
            const double c = tr.x0 - xi * dt, h = scale[k] * output_half(dxi, dt);
            outs.push_back(window_on_level(tr.levels[k], site_of(params, tr.levels[k], c - h),
                                           site_of(params, tr.levels[k], c + h)));
            which.push_back(k);
        }
        if (outs.empty()) break;
        SplitEvolution e;
        try {
            e = split_evolve(env, params, f, split_m, outs, opt.evolve);
        } catch (const WindowOverflow&) {
            if (attempt == 0) throw;
            break;
        }
        auto dps = d_profiles(e);
        for (size_t w = 0; w < which.size(); ++w) {
            const size_t k = which[w];
            auto p = interface_positions(dps[w], tol);
            tr.minus[k] = p.first;
            tr.plus[k] = p.second;
            if (one_sided(p)) scale[k] *= 2.0;
            else done[k] = 1;
        }
    }
    return tr;
}

InterfaceTrace interface(const EnvironmentSpec& env, const ScalingParams& params, const InitialCondition& f,
                         double x0, const std::vector<double>& times, const InterfaceOptions& opt) {
    std::vector<int64_t> levels;
    for (double t : times) levels.push_back(level_of(params, t));
    return interface(env, params, f, site_of(params, f.level, x0), levels, opt);
}

std::vector<double> MixedSetup::times(const ScalingParams& params) const {
    std::vector<double> t;
    for (int64_t k : levels) t.push_back(time_of(params, k));
    return t;
}

size_t MixedSetup::index_of(int64_t level) const {
    auto it = std::find(levels.begin(), levels.end(), level);
    if (it == levels.end()) throw GeometryError("mixed setup: level not recorded");
    return size_t(it - levels.begin());
}

MixedSetup mixed_setup(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi2,
                       const std::vector<double>& times, double x_lo, double x_hi, const std::vector<double>& depths,
                       bool moves, double safety) {
    if (times.empty()) throw GeometryError("mixed_setup: no levels");
    if (x_hi < x_lo) throw GeometryError("mixed_setup: empty start range");
    MixedSetup m;
    m.xi1 = xi1;
    m.xi2 = xi2;
    m.x_lo = x_lo;
    m.x_hi = x_hi;
    for (double t : times) m.levels.push_back(level_of(params, t));
    std::sort(m.levels.begin(), m.levels.end());
    m.levels.erase(std::unique(m.levels.begin(), m.levels.end()), m.levels.end());
    const double t0 = time_of(params, m.levels.front()), top = time_of(params, m.levels.back());
    const double dxi = std::abs(xi2 - xi1), xbar = std::abs(0.5 * (xi1 + xi2));
    InitialCondition probe;
    probe.xi_ref = std::max(std::abs(xi1), std::abs(xi2));
    FieldLayout layout;
    for (int64_t k : m.levels) {
        const double t = time_of(params, k);
        const double below = t - t0, above = top - t;
        const double reach = 2.0 * output_half(dxi, below) + xbar * below;
        const double pad = above > 0 ? 1.3 * search_radius(probe, above, safety) + output_half(dxi, above) : 0.0;
        const double h = reach + pad + xbar * above + 0.5;
        layout.add(params, t, x_lo - h, x_hi + h);
    }
    if (moves) layout.moves_from = m.levels.front();
    m.w1 = busemann_field(env, params, xi1, layout, depths);
    m.w2 = busemann_field(env, params, xi2, layout, depths);
    return m;
}

namespace {

std::vector<int64_t> levels_from(const MixedSetup& setup, int64_t level) {
    std::vector<int64_t> out;
    for (int64_t k : setup.levels)
        if (k > level) out.push_back(k);
    return out;
}

void mv_check(const ScalingParams& params, const MixedSetup& setup, InterfaceTrace& tr, double theta, double eps) {
    const FarField& a = setup.w1.deepest();
    const FarField& b = setup.w2.deepest();
    for (size_t k = 1; k < tr.size(); ++k) {
        if (!tr.minus[k].finite() || !tr.plus[k].finite()) continue;
        const int64_t level = tr.levels[k];
        int64_t lo = tr.minus[k].m(), hi = tr.plus[k].m();
        if (((lo - level) & 1) != 0) ++lo;
        for (int64_t m = lo; m <= hi; m += 2) {
            if (!a.covers(level, m) || !b.covers(level, m)) continue;
            double r = std::abs(b.value(level, m) - a.value(level, m) - theta) / params.value_scale();
            tr.mv_residual = std::max(tr.mv_residual, r);
            if (r >= eps) ++tr.mv_anomalies;
        }
    }
}

}  // namespace

InterfaceTrace mixed_interface_cut(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                                   int64_t level, int64_t cut, double theta, const InterfaceOptions& opt) {
    auto f = InitialCondition::mixed_busemann_cut(setup.w1, setup.w2, level, cut, theta);
    f.x0 = position_of(params, cut);
    auto tr = interface(env, params, f, cut, levels_from(setup, level), opt);
    mv_check(params, setup, tr, theta, opt.eps_mv);
    return tr;
}

InterfaceTrace mixed_interface(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                               int64_t level, int64_t start_m, const InterfaceOptions& opt) {
    const FarField& a = setup.w1.deepest();
    const FarField& b = setup.w2.deepest();
    if (!a.covers(level, start_m) || !b.covers(level, start_m))
        throw WindowOverflow("mixed_interface: start outside the recorded window");
    return mixed_interface_cut(env, params, setup, level, start_m, b.value(level, start_m) - a.value(level, start_m),
                               opt);
}

InterfaceTrace mixed_interface(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                               double s, double x0, const InterfaceOptions& opt) {
    const int64_t level = level_of(params, s);
    return mixed_interface(env, params, setup, level, site_of(params, level, x0), opt);
}

SemigroupResult semigroup_check(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                                const InterfaceTrace& trace, size_t r, const InterfaceOptions& opt) {
    SemigroupResult res;
    if (r == 0 || r + 1 >= trace.size()) return res;
    auto f = InitialCondition::mixed_busemann_at(setup.w1, setup.w2, trace.start_level, trace.start_m);
    const int64_t level_r = trace.levels[r];
    const double t_r = trace.times[r], top = trace.times.back();
    std::vector<int64_t> rest(trace.levels.begin() + long(r) + 1, trace.levels.end());
    for (int side = 0; side < 2; ++side) {
        const Position& p = side == 0 ? trace.minus[r] : trace.plus[r];
        double& worst = side == 0 ? res.minus : res.plus;
        if (!p.finite()) {
            for (size_t k = r + 1; k < trace.size(); ++k) {
                const Position& q = side == 0 ? trace.minus[k] : trace.plus[k];
                if (!(q == p)) worst = std::numeric_limits<double>::infinity();
            }
            continue;
        }
        const double xr = position_of(params, p.m());
        const double h = 2.0 * output_half(spread(f), top - t_r) + search_radius(f, top - t_r, opt.evolve.safety) +
                         std::abs(mean_direction(f)) * (top - t_r) + 0.5;
        auto ev = evolve_sites(env, params, f, level_r, site_of(params, level_r, xr - h),
                               site_of(params, level_r, xr + h), opt.evolve);
        auto g = InitialCondition::sampled_raw(level_r, ev.sites.front(), ev.raw);
        g.window_only = true;
        g.xi1 = f.xi1;
        g.xi2 = f.xi2;
        g.xi_ref = f.xi_ref;
        auto tr = interface(env, params, g, p.m(), rest, opt);
        for (size_t k = 1; k < tr.size(); ++k) {
            const Position& a = side == 0 ? tr.minus[k] : tr.plus[k];
            const Position& b = side == 0 ? trace.minus[r + k] : trace.plus[r + k];
            if (a.finite() && b.finite()) {
                const int64_t k_level = trace.levels[r + k];
                const int64_t ga = grid_site(a, k_level, side == 0), gb = grid_site(b, k_level, side == 0);
                worst = std::max(worst, double(std::abs(ga - gb)) / 2.0);
            }
            else if (!(a == b)) worst = std::numeric_limits<double>::infinity();
        }
    }
    return res;
}

size_t SplitSet::count_L() const { return size_t(std::count(is_L.begin(), is_L.end(), 1)); }
size_t SplitSet::count_R() const { return size_t(std::count(is_R.begin(), is_R.end(), 1)); }

std::string SplitSet::to_csv() const {
    std::string s = "x,D,is_L,is_R,interval_id\n";
    char buf[128];
    for (size_t k = 0; k < x.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.10g,%.17g,%d,%d,%lld\n", x[k], D[k], int(is_L[k]), int(is_R[k]),
                      (long long)interval[k]);
        s += buf;
    }
    return s;
}

namespace {

SplitSet flag(SplitSet s, double eps) {
    const size_t n = s.D.size();
    s.is_L.assign(n, 0);
    s.is_R.assign(n, 0);
    s.is_M.assign(n, 0);
    s.interval.assign(n, 0);
    size_t start = 0;
    int64_t id = 0;
    for (size_t k = 0; k < n; ++k) {
        if (k > 0 && s.D[k] - s.D[k - 1] > eps) {
            s.is_L[k] = 1;
            s.is_R[k - 1] = 1;
            s.intervals.emplace_back(start, k - 1);
            start = k;
            ++id;
        }
        s.interval[k] = id;
    }
    if (n > 0) s.intervals.emplace_back(start, n - 1);
    for (size_t k = 0; k < n; ++k) s.is_M[k] = s.is_L[k] && s.is_R[k];
    return s;
}

}  // namespace

SplitSet split_set(const DifferenceProfile& d, double eps_D) {
    SplitSet s;
    s.level = d.level;
    s.t = d.t;
    s.sites = d.sites;
    s.x = d.x;
    s.D = d.values;
    return flag(std::move(s), eps_D);
}

SplitSet splitting_points(const EnvironmentSpec& env, const ScalingParams& params, double xi1, double xi2, double t,
                          double a, double b, double step, const std::vector<double>& depths, double eps_D) {
    return split_set(difference_profile(env, params, xi1, xi2, t, a, b, step, depths), eps_D);
}

SplitSet splitting_points(const ScalingParams& params, const MixedSetup& setup, int64_t level, int64_t m_lo,
                          int64_t m_hi, double eps_D) {
    Window w = window_on_level(level, m_lo, m_hi);
    const FarField& a = setup.w1.deepest();
    const FarField& b = setup.w2.deepest();
    SplitSet s;
    s.level = level;
    s.t = time_of(params, level);
    const double base = b.value(level, w.m_lo) - a.value(level, w.m_lo);
    for (int64_t m = w.m_lo; m <= w.m_hi; m += 2) {
        s.sites.push_back(m);
        s.x.push_back(position_of(params, m));
        s.D.push_back((b.value(level, m) - a.value(level, m) - base) / params.value_scale());
    }
    return flag(std::move(s), eps_D);
}

ChainResult bi_infinite_chain(const EnvironmentSpec& env, const ScalingParams& params, const MixedSetup& setup,
                              int64_t level, int64_t x, const InterfaceOptions& opt) {
    const FarField& a = setup.w1.deepest();
    const FarField& b = setup.w2.deepest();
    if (a.moves.empty() || b.moves.empty()) throw GeometryError("bi_infinite_chain: setup recorded without moves");
    if (!a.covers(level, x) || !b.covers(level, x)) throw WindowOverflow("bi_infinite_chain: start outside the fields");
    auto D = [&](int64_t k, int64_t m) { return b.value(k, m) - a.value(k, m); };
    ChainResult res;
    res.theta = D(level, x);
    const size_t top = setup.index_of(level);
    const double tol = opt.eps_mv * params.value_scale();
    int64_t cur_level = level, cur = x;
    Position cur_pos = Position::at(x);
    int64_t deepest_cut = x;
    for (size_t j = top; j-- > 0;) {
        ChainStep st;
        st.level = setup.levels[j];
        // Left end from the last site below theta, so F(g1) >= 0.
        const int64_t left = std::abs(D(cur_level, cur) - res.theta) < tol ? cur : cur - 2;
        st.g1 = a.moves.backtrack(cur_level, left, st.level, Side::Left).back();
        st.g2 = b.moves.backtrack(cur_level, cur, st.level, Side::Left).back();
        auto F = [&](int64_t m) { return res.theta - D(st.level, m); };
        st.f_lo = F(st.g1) / params.value_scale();
        st.f_hi = F(st.g2) / params.value_scale();
        for (int64_t m = st.g1; m <= st.g2; m += 2)
            if (F(m) < tol) {
                if (m > st.g1 || std::abs(F(m)) < tol) st.root = m;
                break;
            }
        if (!st.root) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "root not found at t=%.4g: F(g1)=%.6g F(g2)=%.6g bracket [%lld, %lld]",
                          time_of(params, st.level), st.f_lo, st.f_hi, (long long)st.g1, (long long)st.g2);
            res.failure = buf;
            res.steps.push_back(st);
            return res;
        }
        // F usually steps over zero between two sites; the anchor is then the gap.
        st.exact = std::abs(F(*st.root)) < tol;
        const int64_t cut = st.exact ? *st.root : *st.root - 1;
        // A run where D = theta may reach left of the bracket; interfaces from below take its left end.
        int64_t first = cut;
        if (st.exact)
            while (a.covers(st.level, first - 2) && b.covers(st.level, first - 2) && F(first - 2) < tol) first -= 2;
        st.tau = Position::at(first);
        auto tr = mixed_interface_cut(env, params, setup, st.level, cut, res.theta, opt);
        const size_t k = size_t(std::find(tr.levels.begin(), tr.levels.end(), cur_level) - tr.levels.begin());
        st.landed = tr.minus[k];
        st.verified = st.landed == cur_pos;
        res.steps.push_back(st);
        if (!st.verified) {
            res.failure = "step from t=" + std::to_string(time_of(params, st.level)) + " landed at " + st.landed.str() +
                          " instead of " + cur_pos.str();
            return res;
        }
        cur_level = st.level;
        cur = *st.root;
        cur_pos = st.tau;
        deepest_cut = cut;
    }
    if (res.steps.empty()) {
        res.failure = "no level below the start";
        return res;
    }
    res.complete = true;
    res.trace = mixed_interface_cut(env, params, setup, cur_level, deepest_cut, res.theta, opt);
    res.verified = res.trace.levels.back() == level && res.trace.minus.back() == Position::at(x);
    for (size_t i = 0; i + 1 < res.steps.size(); ++i) {
        const auto& st = res.steps[i];
        const size_t k = size_t(std::find(res.trace.levels.begin(), res.trace.levels.end(), st.level) -
                                res.trace.levels.begin());
        if (k >= res.trace.size() || !(res.trace.minus[k] == st.tau)) res.verified = false;
    }
    if (!res.verified) res.failure = "deepest anchor landed at " + res.trace.minus.back().str();
    return res;
}

std::vector<uint8_t> branch_points(const MixedSetup& setup, int64_t level, const std::vector<int64_t>& sites,
                                   int64_t dk) {
    const FarField& a = setup.w1.deepest();
    const FarField& b = setup.w2.deepest();
    std::vector<uint8_t> out;
    auto apart = [&](int64_t ml, int64_t mr) {
        if (!a.moves.covers(level, ml) || !b.moves.covers(level, mr)) return false;
        auto l = a.moves.backtrack(level, ml, level - dk, Side::Left);
        auto r = b.moves.backtrack(level, mr, level - dk, Side::Right);
        for (size_t k = 1; k < l.size(); ++k)
            if (l[k] >= r[k]) return false;
        return true;
    };
    for (int64_t m : sites) out.push_back(apart(m, m) || apart(m - 2, m) || apart(m, m + 2));
    return out;
}

MeetingReport meeting_and_ordering(const InterfaceTrace& a, const InterfaceTrace& b) {
    if (a.levels != b.levels) throw GeometryError("meeting_and_ordering: traces on different levels");
    MeetingReport rep;
    auto first = [&](const std::vector<Position>& u, const std::vector<Position>& v) -> std::optional<int64_t> {
        for (size_t k = 0; k < a.size(); ++k)
            if (same_cell(u[k], v[k])) return a.levels[k];
        return std::nullopt;
    };
    rep.t_RL = first(a.plus, b.minus);
    rep.t_LL = first(a.minus, b.minus);
    rep.t_RR = first(a.plus, b.plus);
    rep.t_LR = first(a.minus, b.plus);
    for (size_t k = 0; k < a.size(); ++k) {
        if (b.minus[k] < a.minus[k]) ++rep.ordering_violations;
        if (b.plus[k] < a.plus[k]) ++rep.ordering_violations;
        if (!(a.plus[k] < b.minus[k])) ++rep.disjoint_violations;
    }
    if (rep.t_RL) {
        int64_t end = std::numeric_limits<int64_t>::max();
        if (rep.t_LL) end = std::min(end, *rep.t_LL);
        if (rep.t_RR) end = std::min(end, *rep.t_RR);
        for (size_t k = 0; k < a.size(); ++k)
            if (a.levels[k] >= *rep.t_RL && a.levels[k] <= end && !same_cell(a.plus[k], b.minus[k]))
                ++rep.squeeze_violations;
    }
    return rep;
}

std::vector<Bubble> bubble_search(const InterfaceTrace& tr) {
    std::vector<Bubble> out;
    auto state = [&](size_t k) {
        if (!tr.minus[k].finite() || !tr.plus[k].finite()) return 0;
        return tr.plus[k].m() - tr.minus[k].m() <= 2 ? 1 : 2;
    };
    std::optional<size_t> last_eq;
    bool apart = false;
    for (size_t k = 0; k < tr.size(); ++k) {
        int s = state(k);
        if (s == 0) {
            last_eq.reset();
            apart = false;
        } else if (s == 2) {
            if (last_eq) apart = true;
        } else {
            if (apart && k + 1 < tr.size()) out.push_back({*last_eq, k, state(k + 1) == 1});
            last_eq = k;
            apart = false;
        }
    }
    return out;
}

}  // namespace kpzlab
