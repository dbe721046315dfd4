#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "kpzlab/eternal.hpp"
#include "kpzlab/figures.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/suites.hpp"

namespace fs = std::filesystem;
using namespace kpzlab;

namespace {

constexpr int kOk = 0, kCheckFail = 1, kUsage = 2;

struct Globals {
    uint64_t seed = 1;
    int64_t n = 500;
    std::string config;
    std::string out = "kpzlab-out";
    int threads = 1;
    bool deterministic = false;
    bool no_cache = false;
    bool quiet = false;
};

struct Context {
    Globals g;
    Config config;
    Tolerances tol;
    EnvironmentSpec env;
    std::unique_ptr<ScalingParams> params;
    std::unique_ptr<Cache> cache;
    fs::path out;
    std::vector<std::string> outputs;
    json record = json::object();

    int threads() const { return g.deterministic ? 1 : std::max(1, g.threads); }
    std::string emit(const std::string& name, const std::string& content) {
        write_file(out / name, content);
        outputs.push_back(name);
        return (out / name).string();
    }
    void emit_plot_files(const Plot& p, const std::string& name) {
        for (const auto& path : emit_plot(p, out, name)) outputs.push_back(fs::path(path).filename().string());
    }
};

std::string csv_of(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
    std::ostringstream os;
    os.precision(17);
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    const size_t rows = cols.empty() ? 0 : cols.front().size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c][r];
        os << '\n';
    }
    return os.str();
}

std::vector<double> ladder(double t0, double t1, double dt) {
    if (!(dt > 0) || t1 < t0) throw ConfigError("time ladder needs dt > 0 and t1 >= t0");
    std::vector<double> out;
    const int k = int(std::lround((t1 - t0) / dt));
    for (int i = 0; i <= k; ++i) out.push_back(t0 + dt * i);
    return out;
}

json options_of(const CLI::App* sub) {
    json j = json::object();
    for (const CLI::Option* o : sub->get_options()) {
        if (o->get_lnames().empty() || o->get_lnames().front() == "help") continue;
        const std::string name = o->get_lnames().front();
        if (o->get_expected_max() == 0) j[name] = o->count() > 0;
        else if (o->count() > 0) j[name] = o->results();
        else j[name] = o->get_default_str();
    }
    return j;
}

}  // namespace

int dispatch(std::vector<std::string> args);

namespace {

int replay(const fs::path& manifest, const std::string& out) {
    const RunManifest m = RunManifest::read(manifest);
    if (!m.params.contains("argv")) throw ConfigError("manifest has no argv record");
    std::vector<std::string> args = m.params["argv"].get<std::vector<std::string>>();
    std::vector<std::string> cleaned;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) continue;
        cleaned.push_back(args[i]);
    }
    cleaned.insert(cleaned.begin(), {"--out", out, "--deterministic"});
    return dispatch(cleaned);
}

}  // namespace

int dispatch(std::vector<std::string> args) {
    CLI::App app{"kpzlab: last-passage percolation experiments, interfaces and verification suites"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "environment seed")->capture_default_str();
    app.add_option("--n", g.n, "scaling parameter n")->capture_default_str();
    app.add_option("--config", g.config, "key = value config file with [sections]");
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for independent trials")->capture_default_str();
    app.add_flag("--deterministic", g.deterministic, "serial reductions; replays are byte-identical");
    app.add_flag("--no-cache", g.no_cache, "disable the value-field cache (every lookup misses)");
    app.add_flag("--quiet", g.quiet, "suppress progress output");
    app.footer("Config defaults:\n" + Config::defaults().to_text() +
               "\nExit codes: 0 ok, 1 check failed or numeric error, 2 usage error.");

    // env-sample
    auto* env_sample = app.add_subcommand("env-sample", "write the vertex weights of a lattice rectangle");
    int64_t es_i0 = 0, es_j0 = 0, es_w = 8, es_h = 8;
    env_sample->add_option("--i0", es_i0)->capture_default_str();
    env_sample->add_option("--j0", es_j0)->capture_default_str();
    env_sample->add_option("--width", es_w)->capture_default_str();
    env_sample->add_option("--height", es_h)->capture_default_str();

    // lpp
    auto* lpp = app.add_subcommand("lpp", "last-passage value and geodesic between two scaled points");
    std::vector<double> lp_from{0.0, 0.0}, lp_to{0.0, 1.0};
    bool lp_lattice = false;
    lpp->add_option("--from", lp_from, "x,t (or i,j with --lattice)")->delimiter(',')->expected(2)->capture_default_str();
    lpp->add_option("--to", lp_to, "x,t (or i,j with --lattice)")->delimiter(',')->expected(2)->capture_default_str();
    lpp->add_flag("--lattice", lp_lattice, "coordinates are lattice indices");

    // geodesic
    auto* geo = app.add_subcommand("geodesic", "semi-infinite geodesic proxy in direction xi");
    double ge_xi = 0.0, ge_x = 0.0, ge_t = 0.0;
    std::string ge_side = "L";
    std::vector<double> ge_depths{8, 16};
    geo->add_option("--xi", ge_xi)->capture_default_str();
    geo->add_option("--x", ge_x)->capture_default_str();
    geo->add_option("--t", ge_t)->capture_default_str();
    geo->add_option("--side", ge_side)->check(CLI::IsMember({"L", "R"}))->capture_default_str();
    geo->add_option("--depths", ge_depths)->delimiter(',')->capture_default_str();

    // busemann
    auto* bus = app.add_subcommand("busemann", "Busemann profile W(anchor, t; x, t) on a window");
    double bu_xi = 0.0, bu_t = 0.0, bu_a = -1.0, bu_b = 1.0, bu_step = 0.05, bu_anchor = 0.0;
    std::vector<double> bu_depths{4, 8, 16};
    bus->add_option("--xi", bu_xi)->capture_default_str();
    bus->add_option("--t", bu_t)->capture_default_str();
    bus->add_option("--a", bu_a)->capture_default_str();
    bus->add_option("--b", bu_b)->capture_default_str();
    bus->add_option("--step", bu_step, "grid step, 0 for every site")->capture_default_str();
    bus->add_option("--anchor", bu_anchor)->capture_default_str();
    bus->add_option("--depths", bu_depths)->delimiter(',')->capture_default_str();

    // diff-profile
    auto* diff = app.add_subcommand("diff-profile", "difference profile D and its split set");
    double df_xi1 = -0.1, df_xi2 = 0.1, df_t = 0.0, df_a = -1.0, df_b = 1.0, df_step = 0.0;
    std::vector<double> df_depths{8, 16};
    diff->add_option("--xi1", df_xi1)->capture_default_str();
    diff->add_option("--xi2", df_xi2)->capture_default_str();
    diff->add_option("--t", df_t)->capture_default_str();
    diff->add_option("--a", df_a)->capture_default_str();
    diff->add_option("--b", df_b)->capture_default_str();
    diff->add_option("--step", df_step, "grid step, 0 for every site")->capture_default_str();
    diff->add_option("--depths", df_depths)->delimiter(',')->capture_default_str();

    // evolve
    auto* evo = app.add_subcommand("evolve", "variational evolution of an initial condition");
    std::string ev_ic = "flat";
    double ev_sigma = 0.0, ev_z0 = 0.0, ev_xi = 0.0, ev_s = 0.0, ev_t = 1.0, ev_a = -1.0, ev_b = 1.0;
    evo->add_option("--ic", ev_ic)->check(CLI::IsMember({"flat", "linear", "wedge", "stationary"}))->capture_default_str();
    evo->add_option("--sigma", ev_sigma, "slope for linear")->capture_default_str();
    evo->add_option("--z0", ev_z0, "wedge tip")->capture_default_str();
    evo->add_option("--xi", ev_xi, "direction for stationary")->capture_default_str();
    evo->add_option("--s", ev_s)->capture_default_str();
    evo->add_option("--t", ev_t)->capture_default_str();
    evo->add_option("--a", ev_a)->capture_default_str();
    evo->add_option("--b", ev_b)->capture_default_str();

    // interface, chain, eternal share the mixed setup options
    struct MixedArgs {
        double xi1 = -0.2, xi2 = 0.2, t0 = 0.0, t1 = 1.0, dt = 0.1, lo = -0.5, hi = 0.5;
        std::vector<double> depths{8, 16};
    };
    auto add_mixed = [](CLI::App* sub, MixedArgs& m) {
        sub->add_option("--xi1", m.xi1)->capture_default_str();
        sub->add_option("--xi2", m.xi2)->capture_default_str();
        sub->add_option("--t0", m.t0, "first level")->capture_default_str();
        sub->add_option("--t1", m.t1, "last level")->capture_default_str();
        sub->add_option("--dt", m.dt, "level spacing")->capture_default_str();
        sub->add_option("--lo", m.lo, "left end of the start window")->capture_default_str();
        sub->add_option("--hi", m.hi, "right end of the start window")->capture_default_str();
        sub->add_option("--depths", m.depths)->delimiter(',')->capture_default_str();
    };
    auto* itf = app.add_subcommand("interface", "mixed Busemann interface from (x0, t0)");
    MixedArgs it_m;
    double it_x0 = 0.0;
    add_mixed(itf, it_m);
    itf->add_option("--x0", it_x0)->capture_default_str();

    auto* chn = app.add_subcommand("chain", "backward chain from a split point at t1");
    MixedArgs ch_m;
    ch_m.t1 = 1.2;
    ch_m.dt = 0.2;
    double ch_x = 0.0;
    bool ch_nearest = false;
    add_mixed(chn, ch_m);
    chn->add_option("--x", ch_x, "start position at t1")->capture_default_str();
    chn->add_flag("--nearest-split", ch_nearest, "move x to the nearest left split point");

    auto* etn = app.add_subcommand("eternal", "stitched eternal solution along a mixed interface");
    MixedArgs et_m;
    et_m.dt = 0.2;
    double et_x0 = 0.0;
    add_mixed(etn, et_m);
    etn->add_option("--x0", et_x0)->capture_default_str();

    auto* lim = app.add_subcommand("limits", "far-point profiles in direction xi against the xi1/xi2 brackets");
    double li_xi1 = -0.5, li_xi = 0.0, li_xi2 = 0.5, li_t = 0.0, li_a = -0.5, li_b = 0.5;
    std::vector<double> li_seq{4, 8, 16}, li_br{8, 16};
    lim->add_option("--xi1", li_xi1)->capture_default_str();
    lim->add_option("--xi", li_xi)->capture_default_str();
    lim->add_option("--xi2", li_xi2)->capture_default_str();
    lim->add_option("--t", li_t)->capture_default_str();
    lim->add_option("--a", li_a)->capture_default_str();
    lim->add_option("--b", li_b)->capture_default_str();
    lim->add_option("--depths", li_seq)->delimiter(',')->capture_default_str();
    lim->add_option("--brackets", li_br)->delimiter(',')->capture_default_str();

    auto* ver = app.add_subcommand("verify", "run a verification suite (or all)");
    std::string suite_id;
    std::vector<std::string> ids{"all"};
    for (const auto& s : suites()) ids.push_back(s.id);
    ver->add_option("suite", suite_id, "suite id")->required()->check(CLI::IsMember(ids));
    bool ver_use_n = false;

    auto* rep = app.add_subcommand("report", "summarize suite reports, or replay a manifest");
    std::string rp_dir, rp_replay;
    rep->add_option("dir", rp_dir, "directory with report_*.json (default: --out)");
    rep->add_option("--replay", rp_replay, "manifest to re-run into --out");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string op = sub->get_name();
    Context ctx;
    ctx.g = g;
    ctx.out = g.out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ctx.config = Config::defaults();
        if (!g.config.empty()) ctx.config.merge(Config::load(g.config));
        // Command-line flags win over the config file.
        if (app.get_option("--seed")->count() == 0) ctx.g.seed = uint64_t(ctx.config.get_int("run", "seed"));
        if (app.get_option("--n")->count() == 0 && !g.config.empty()) ctx.g.n = ctx.config.get_int("run", "n");
        if (app.get_option("--threads")->count() == 0) ctx.g.threads = int(ctx.config.get_int("run", "threads"));
        if (!g.deterministic) ctx.g.deterministic = ctx.config.get_bool("run", "deterministic");
        ctx.tol = ctx.config.tolerances();
        ctx.env = EnvironmentSpec{ctx.g.seed};
        ctx.params = std::make_unique<ScalingParams>(ctx.g.n);
        const bool cache_on = !g.no_cache && ctx.config.get_bool("cache", "enabled");
        fs::path cache_dir = ctx.config.get("cache", "dir");
        if (cache_dir.is_relative()) cache_dir = ctx.out / cache_dir;
        ctx.cache = std::make_unique<Cache>(cache_dir, cache_on);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    ver_use_n = app.get_option("--n")->count() > 0 || !g.config.empty();

    const ScalingParams& P = *ctx.params;
    const EnvironmentSpec& env = ctx.env;
    const FarFieldSource src = cache_source(ctx.cache.get(), env, P);
    int code = kOk;
    try {
        fs::create_directories(ctx.out);
        if (op == "env-sample") {
            if (es_w <= 0 || es_h <= 0) throw ConfigError("width and height must be positive");
            const auto block = weight_block(env, {{es_i0, es_j0}, {es_i0 + es_w - 1, es_j0 + es_h - 1}});
            std::vector<double> is, js, ws;
            for (int64_t j = es_j0; j < es_j0 + es_h; ++j)
                for (int64_t i = es_i0; i < es_i0 + es_w; ++i) is.push_back(double(i)), js.push_back(double(j)), ws.push_back(block.at(i, j));
            ctx.emit("weights.csv", csv_of({"i", "j", "w"}, {is, js, ws}));
            double sum = 0;
            for (double w : ws) sum += w;
            ctx.record = {{"count", ws.size()}, {"mean", sum / double(ws.size())}};
        } else if (op == "lpp") {
            LatticePoint p, q;
            if (lp_lattice) {
                p = {int64_t(lp_from[0]), int64_t(lp_from[1])};
                q = {int64_t(lp_to[0]), int64_t(lp_to[1])};
            } else {
                p = to_lattice(P, {lp_from[0], lp_from[1]});
                q = to_lattice(P, {lp_to[0], lp_to[1]});
            }
            const double raw = lpp_value(env, p, q);
            const Geodesic gl = geodesic(env, p, q, Side::Left), gr = geodesic(env, p, q, Side::Right);
            ctx.emit("geodesic_left.csv", gl.to_csv());
            ctx.emit("geodesic_right.csv", gr.to_csv());
            ctx.record = {{"from", {p.i, p.j}},
                          {"to", {q.i, q.j}},
                          {"raw", raw},
                          {"scaled", scaled_from_raw(P, raw, q.level() - p.level())},
                          {"certified", gl.weight(env) == raw && gr.weight(env) == raw}};
            if (!ctx.record["certified"].get<bool>()) code = kCheckFail;
        } else if (op == "geodesic") {
            const GeodesicRay r = ray(env, P, ge_xi, {ge_x, ge_t}, ge_side == "L" ? Side::Left : Side::Right, ge_depths);
            ctx.emit("ray.csv", r.to_csv(P));
            ctx.record = {{"direction", r.direction}, {"certified", r.certified},
                          {"stabilized_above_t", time_of(P, r.stabilized_above)}, {"levels", r.size()}};
        } else if (op == "busemann") {
            const auto e = busemann_profile(env, P, bu_xi, bu_t, bu_a, bu_b, bu_step, bu_depths, bu_anchor, ctx.tol.stab, src);
            ctx.emit("busemann.csv", e.to_csv());
            ctx.emit("busemann.json", json::parse(e.header_json(P.n)).dump(2) + "\n");
            ctx.record = {{"stabilized", e.stabilized}, {"stabilization_depth", e.stabilization_depth}};
        } else if (op == "diff-profile") {
            const auto d = difference_profile(env, P, df_xi1, df_xi2, df_t, df_a, df_b, df_step, df_depths, ctx.tol.mono, src);
            const SplitSet ss = split_set(d, ctx.tol.split);
            ctx.emit("diff_profile.csv", d.to_csv());
            ctx.emit("diff_profile.json", json::parse(d.header_json(P.n)).dump(2) + "\n");
            ctx.emit("split_set.csv", ss.to_csv());
            ctx.emit_plot_files(profile_plot("difference profile", d.x, {{"D", d.values}}), "diff_profile");
            ctx.record = {{"stabilized", d.stabilized}, {"monotone_violations", d.monotone_violations},
                          {"split_L", ss.count_L()}, {"split_R", ss.count_R()}, {"intervals", ss.intervals.size()}};
            if (d.monotone_violations > 0) code = kCheckFail;
        } else if (op == "evolve") {
            InitialCondition f;
            if (ev_ic == "flat") f = InitialCondition::flat(P, ev_s);
            else if (ev_ic == "linear") f = InitialCondition::linear(P, ev_s, ev_sigma);
            else if (ev_ic == "wedge") f = InitialCondition::narrow_wedge(P, ev_s, ev_z0);
            else f = InitialCondition::stationary(P, ev_s, ev_xi, env.seed, ev_a - 6.0, ev_b + 6.0);
            const Evolution e = evolve(env, P, f, ev_t, ev_a, ev_b);
            ctx.emit("profile.csv", e.profile(P).to_csv());
            std::vector<double> x, cl, cr;
            for (size_t i = 0; i < e.sites.size(); ++i) {
                x.push_back(position_of(P, e.sites[i]));
                cl.push_back(position_of(P, e.chi_left[i]));
                cr.push_back(position_of(P, e.chi_right[i]));
            }
            ctx.emit("exits.csv", csv_of({"x", "chi_left", "chi_right"}, {x, cl, cr}));
            ctx.emit_plot_files(profile_plot("evolved profile", x, {{"h", e.values}}), "profile");
            ctx.record = {{"initial", f.describe()}, {"widenings", e.widenings}, {"points", e.sites.size()}};
        } else if (op == "interface" || op == "chain" || op == "eternal") {
            const MixedArgs& m = op == "interface" ? it_m : op == "chain" ? ch_m : et_m;
            const bool moves = op != "interface";
            const MixedSetup S = mixed_setup(env, P, m.xi1, m.xi2, ladder(m.t0, m.t1, m.dt), m.lo, m.hi, m.depths, moves);
            InterfaceOptions iopt;
            iopt.eps_d = ctx.tol.d_sign;
            iopt.eps_mv = ctx.tol.mv;
            if (op == "interface") {
                const auto tr = mixed_interface(env, P, S, m.t0, it_x0, iopt);
                const auto bubbles = bubble_search(tr);
                ctx.emit("interface.csv", tr.to_csv(P));
                const int64_t top = tr.levels.back();
                std::vector<GeodesicRay> rays;
                if (tr.minus.back().finite() && tr.plus.back().finite()) {
                    rays.push_back(ray_bundle(env, P, m.xi1, top, {grid_site(tr.minus.back(), top, true)}, Side::Left,
                                              m.depths)
                                       .front());
                    rays.push_back(ray_bundle(env, P, m.xi2, top, {grid_site(tr.plus.back(), top, false)}, Side::Right,
                                              m.depths)
                                       .front());
                }
                ctx.emit_plot_files(interface_plot(P, tr, rays), "interface");
                ctx.emit_plot_files(bubble_plot(P, tr, bubbles), "bubbles");
                json bs = json::array();
                for (const auto& b : bubbles)
                    bs.push_back({{"open_t", tr.times[b.open]}, {"close_t", tr.times[b.close]}, {"persists", b.persists},
                                  {"interior", b.interior()}});
                ctx.record = {{"ordering_violations", tr.ordering_violations()}, {"mv_residual", tr.mv_residual},
                              {"mv_anomalies", tr.mv_anomalies}, {"bubbles", bs}};
                if (tr.ordering_violations() > 0) code = kCheckFail;
            } else if (op == "chain") {
                const int64_t top = S.levels.back();
                int64_t x = site_of(P, top, ch_x);
                if (ch_nearest) {
                    const SplitSet ss = splitting_points(P, S, top, site_of(P, top, m.lo), site_of(P, top, m.hi), ctx.tol.split);
                    int64_t best = -1;
                    for (size_t i = 0; i < ss.sites.size(); ++i)
                        if (ss.is_L[i] && (best < 0 || std::abs(ss.sites[i] - x) < std::abs(ss.sites[size_t(best)] - x)))
                            best = int64_t(i);
                    if (best < 0) throw RootNotFound("no left split point in the window at t1");
                    x = ss.sites[size_t(best)];
                }
                const ChainResult ch = bi_infinite_chain(env, P, S, top, x, iopt);
                json steps = json::array();
                for (const auto& s : ch.steps)
                    steps.push_back({{"t", time_of(P, s.level)}, {"g1", s.g1}, {"g2", s.g2}, {"F_lo", s.f_lo},
                                     {"F_hi", s.f_hi}, {"root", s.root ? json(*s.root) : json()}, {"exact", s.exact},
                                     {"verified", s.verified}, {"landed", s.landed.str()}});
                ctx.emit("chain.json", json{{"start", x}, {"theta", ch.theta}, {"complete", ch.complete},
                                            {"verified", ch.verified}, {"failure", ch.failure}, {"steps", steps}}
                                           .dump(2) + "\n");
                if (!ch.trace.levels.empty()) {
                    ctx.emit("chain_trace.csv", ch.trace.to_csv(P));
                    ctx.emit_plot_files(interface_plot(P, ch.trace), "chain");
                }
                ctx.record = {{"complete", ch.complete}, {"verified", ch.verified}, {"steps", ch.steps.size()},
                              {"failure", ch.failure}};
                if (!(ch.complete && ch.verified)) code = kCheckFail;
            } else {
                const auto tr = mixed_interface(env, P, S, m.t0, et_x0, iopt);
                const EternalApprox b = stitch(P, S, tr, ctx.tol.mv);
                const int64_t k0 = S.levels.front(), kt = S.levels.back();
                const ResidualReport rr = evolution_residual(env, P, b, k0, kt);
                const int64_t lo = grid_site(tr.minus.back(), kt, true) - 60, hi = grid_site(tr.plus.back(), kt, false) + 60;
                const Cutoffs c = cutoff_tau_b(env, P, S, b, kt, lo, hi, k0);
                ctx.emit("eternal.csv", b.to_csv(P));
                ctx.emit("interface.csv", tr.to_csv(P));
                ctx.record = {{"residual", rr.residual},
                              {"seam_mismatch", b.seam_mismatch},
                              {"tau_b_R", c.r.str()},
                              {"tau_b_L", c.l.str()},
                              {"cutoff_monotone_violations", c.monotone_violations}};
                if (rr.residual >= ctx.tol.evol || c.l < c.r) code = kCheckFail;
            }
        } else if (op == "limits") {
            const auto s = busemann_limit_forward(env, P, li_xi1, li_xi, li_xi2, li_seq, li_t, li_a, li_b, 0.0, li_br,
                                                  ctx.tol.cluster);
            ctx.emit("limits.json", json::parse(s.to_json()).dump(2) + "\n");
            std::vector<std::pair<std::string, std::vector<double>>> ys{{"W xi1", s.lower}, {"W xi2", s.upper}};
            for (const auto& r : s.rows) ys.push_back({"depth " + std::to_string(int(r.depth)), r.profile});
            std::vector<double> x;
            for (int64_t m : s.sites) x.push_back(position_of(P, m));
            ctx.emit_plot_files(profile_plot("far-point profiles", x, ys), "limits");
            ctx.record = {{"violations", s.violations()}, {"stabilized", s.stabilized}, {"clusters", s.clusters.size()}};
            if (s.violations() > 0) code = kCheckFail;
        } else if (op == "verify") {
            SuiteOptions so;
            so.seed = ctx.g.seed;
            if (ver_use_n) so.n = ctx.g.n;
            so.tol = ctx.tol;
            so.threads = ctx.threads();
            so.cache = ctx.cache.get();
            so.out_dir = ctx.out.string();
            if (!g.quiet) so.progress = [](const std::string& s) { std::cerr << "  .. " << s << '\n'; };
            std::vector<std::string> run;
            if (suite_id == "all") {
                for (const auto& s : suites())
                    if (s.criterion > 0) run.push_back(s.id);
            } else {
                run.push_back(suite_id);
            }
            json summary = json::array();
            for (const auto& id : run) {
                const SuiteReport r = run_suite(id, so);
                std::cout << r.line() << std::endl;
                ctx.emit("report_" + id + ".json", r.to_json().dump(2) + "\n");
                for (const auto& o : r.outputs) ctx.outputs.push_back(fs::path(o).filename().string());
                summary.push_back({{"suite", id}, {"status", r.passed() ? "pass" : "fail"}});
                if (!r.passed()) code = kCheckFail;
            }
            ctx.record = {{"suites", summary}};
        } else if (op == "report") {
            if (!rp_replay.empty()) return replay(rp_replay, g.out);
            const fs::path dir = rp_dir.empty() ? ctx.out : fs::path(rp_dir);
            if (!fs::is_directory(dir)) throw ConfigError("no such directory " + dir.string());
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(dir))
                if (e.path().filename().string().rfind("report_", 0) == 0 && e.path().extension() == ".json")
                    files.push_back(e.path());
            std::sort(files.begin(), files.end());
            if (files.empty()) throw ConfigError("no report_*.json in " + dir.string());
            std::ostringstream md;
            md << "| criterion | suite | status | seconds |\n|---|---|---|---|\n";
            json rows = json::array();
            for (const auto& f : files) {
                const json r = json::parse(read_file(f));
                const std::string status = r.value("status", "?");
                if (status != "pass") code = kCheckFail;
                md << "| " << r.value("criterion", 0) << " | " << r.value("suite", "?") << " | " << status << " | "
                   << r.value("seconds", 0.0) << " |\n";
                rows.push_back({{"suite", r.value("suite", "?")}, {"status", status}});
                std::cout << status << ' ' << r.value("suite", "?") << '\n';
            }
            ctx.out = dir;
            ctx.emit("summary.md", md.str());
            ctx.record = {{"reports", rows}};
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        const json err{{"error", e.kind()}, {"message", e.what()}, {"operation", op}, {"seed", env.seed}, {"n", P.n}};
        std::cout << err.dump() << std::endl;
        try {
            write_file(ctx.out / "error.json", err.dump(2) + "\n");
        } catch (const Error&) {
        }
        return kCheckFail;
    }

    RunManifest man;
    man.env = env;
    man.n = P.n;
    man.operation = op;
    man.params = {{"argv", args}, {"options", options_of(sub)}, {"globals", {{"seed", ctx.g.seed}, {"n", ctx.g.n},
                  {"threads", ctx.threads()}, {"deterministic", ctx.g.deterministic}}},
                  {"config", ctx.config.to_json()}, {"result", ctx.record},
                  {"cache", {{"hits", ctx.cache->hits}, {"misses", ctx.cache->misses}, {"corrupt", ctx.cache->corrupt}}}};
    man.outputs = ctx.outputs;
    man.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    man.write(ctx.out / "manifest.json");
    if (!g.quiet && op != "verify" && op != "report") std::cout << ctx.record.dump() << std::endl;
    return code;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args);
}
