#include <doctest.h>

#include "kpzlab/eternal.hpp"

using namespace kpzlab;

namespace {

struct Fixture {
    ScalingParams p{200};
    EnvironmentSpec env{3};
    MixedSetup S = mixed_setup(env, p, -0.2, 0.2, {0.0, 0.2, 0.4}, -0.3, 0.3, {8, 16}, true);
    InterfaceTrace tr = mixed_interface(env, p, S, 0.0, 0.0);
};

}  // namespace

TEST_CASE("stitched field solves the evolution") {
    Fixture f;
    const EternalApprox b = stitch(f.p, f.S, f.tr);
    CHECK(b.raw(b.anchor_level, b.anchor_m) == 0.0);
    const auto lv = b.levels();
    REQUIRE(lv.size() == 3);
    CHECK(evolution_residual(f.env, f.p, b, lv.front(), lv.back()).residual < 1e-5);
    CHECK(evolution_residual(f.env, f.p, b, lv[0], lv[1]).residual < 1e-5);
}

TEST_CASE("recentering shifts values and not geodesics") {
    Fixture f;
    const EternalApprox b = stitch(f.p, f.S, f.tr);
    const EternalApprox c = b.shifted(12.5);
    const int64_t k = b.levels().back(), k0 = b.levels().front();
    const Slice* s = b.find(k);
    REQUIRE(s != nullptr);
    for (int64_t m = s->m_lo; m <= s->m_hi(); m += 2) CHECK(c.raw(k, m) - b.raw(k, m) == 12.5);
    const int64_t m0 = s->m_lo + 2 * (s->size() / 2);
    const auto g1 = b_geodesic(f.env, f.p, b, k, m0, Side::Left, {k0});
    const auto g2 = b_geodesic(f.env, f.p, c, k, m0, Side::Left, {k0});
    CHECK(g1.m == g2.m);
}

TEST_CASE("a spike breaks the evolution identity") {
    Fixture f;
    const EternalApprox b = stitch(f.p, f.S, f.tr);
    const auto lv = b.levels();
    const Slice* top = b.find(lv.back());
    const EternalApprox bad = b.spiked(lv.back(), top->m_lo + 2 * (top->size() / 2), 50.0);
    CHECK(evolution_residual(f.env, f.p, bad, lv.front(), lv.back()).residual > 1e-5);
}

TEST_CASE("cutoffs are ordered") {
    Fixture f;
    const EternalApprox b = stitch(f.p, f.S, f.tr);
    const auto lv = b.levels();
    const int64_t lo = grid_site(f.tr.minus.back(), lv.back(), true) - 20;
    const int64_t hi = grid_site(f.tr.plus.back(), lv.back(), false) + 20;
    const Cutoffs c = cutoff_tau_b(f.env, f.p, f.S, b, lv.back(), lo, hi, lv.front());
    CHECK(c.r <= c.l);
    CHECK(c.monotone_violations == 0);
}

TEST_CASE("decay tables") {
    DecayTable t;
    t.rows = {{-1, 0, 1.0, false}, {-2, 0, 0.05, false}};
    CHECK(t.decayed());
    t.rows.back().sup_diff = 0.5;
    CHECK_FALSE(t.decayed());
    t.rows.back().sup_diff = 0.0;
    CHECK(t.decayed());
    CHECK(t.to_csv().find('\n') != std::string::npos);
}

TEST_CASE("one force one solution: identical conditions coalesce") {
    const ScalingParams p(100);
    const EnvironmentSpec env{4};
    auto f = [&](double s) { return InitialCondition::flat(p, s); };
    const DecayRow r = decay_row(env, p, f(-1.0), f(-1.0), 0.0, -0.25, 0.25, 0.0);
    CHECK(r.sup_diff == 0.0);
    CHECK(r.coalesced);
}

TEST_CASE("dimension estimate of synthetic split sets") {
    SplitSet s;
    for (int i = 0; i <= 100; ++i) {
        s.x.push_back(-1.0 + 0.02 * i);
        s.is_L.push_back(i % 50 == 0);
        s.is_R.push_back(0);
    }
    const auto e = dimension_estimate(s, {0.5, 0.25, 0.125});
    CHECK(e.h.size() == 3);
    CHECK(e.count == std::vector<int64_t>{3, 3, 3});
    CHECK(e.defined);
    CHECK(e.slope == doctest::Approx(0.0));
}
