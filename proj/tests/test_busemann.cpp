#include <doctest.h>

#include <random>

#include "kpzlab/busemann.hpp"
#include "support.hpp"

using namespace kpzlab;

namespace {

FieldLayout small_layout(const ScalingParams& p) {
    FieldLayout l;
    l.add(p, 0.0, -1.0, 1.0);
    l.add(p, 0.3, -0.5, 0.5);
    return l;
}

}  // namespace

TEST_CASE("far field values are last-passage values from the far point") {
    const ScalingParams p(60);
    const EnvironmentSpec env{2};
    FieldLayout l;
    l.add(p, 0.0, -0.3, 0.3);
    const FarField f = far_field(env, p, 0.1, 2.0, l);
    const Slice* s = f.find(level_of(p, 0.0));
    REQUIRE(s != nullptr);
    for (int64_t m = s->m_lo; m <= s->m_hi(); m += 2)
        CHECK(f.value(s->level, m) == lpp_value(env, f.v, LatticePoint::from_level(s->level, m)));
}

TEST_CASE("Busemann increments: anchor, additivity and antisymmetry are exact") {
    const ScalingParams p(100);
    const EnvironmentSpec env{5};
    const BusemannField w = busemann_field(env, p, 0.0, small_layout(p), {4, 8});
    const int64_t k0 = level_of(p, 0.0), k1 = level_of(p, 0.3);
    const Slice* a = w.deepest().find(k0);
    const Slice* b = w.deepest().find(k1);
    std::mt19937_64 rng(1);
    auto pick = [&](const Slice* s) { return s->m_lo + 2 * int64_t(rng() % uint64_t(s->size())); };
    for (int i = 0; i < 200; ++i) {
        const int64_t x = pick(a), y = pick(b), z = pick(a);
        CHECK(w.raw(k0, x, k0, x) == 0.0);
        CHECK(w.raw(k0, x, k1, y) + w.raw(k1, y, k0, z) == w.raw(k0, x, k0, z));
        CHECK(w.raw(k0, x, k0, z) == -w.raw(k0, z, k0, x));
    }
}

TEST_CASE("property: Busemann increments are monotone in the direction") {
    const ScalingParams p(100);
    for (uint64_t seed : kpzlab::testing::property_seeds(8, 10)) {
        const EnvironmentSpec env{seed};
        const auto e1 = busemann_profile(env, p, -0.2, 0.0, -1, 1, 0.0, {8});
        const auto e2 = busemann_profile(env, p, 0.2, 0.0, -1, 1, 0.0, {8});
        REQUIRE(e1.sites == e2.sites);
        for (size_t i = 1; i < e1.raw.size(); ++i) CHECK(e2.raw[i] - e1.raw[i] >= e2.raw[i - 1] - e1.raw[i - 1]);
    }
}

TEST_CASE("profiles are anchored and report stabilization") {
    const ScalingParams p(100);
    const EnvironmentSpec env{3};
    const auto e = busemann_profile(env, p, 0.0, 0.0, -0.5, 0.5, 0.1, {4, 8, 16}, 0.0);
    CHECK(e.sites.size() == e.values.size());
    CHECK(e.per_depth.size() == 3);
    const auto it = std::find(e.sites.begin(), e.sites.end(), e.anchor_site);
    REQUIRE(it != e.sites.end());
    CHECK(e.raw[size_t(it - e.sites.begin())] == 0.0);
    if (e.stabilized) CHECK(e.stabilization_depth > 0.0);
    CHECK(e.to_csv().find("x") != std::string::npos);
}

TEST_CASE("difference profiles require stabilized inputs and count decreases") {
    const ScalingParams p(100);
    BusemannEstimate a, b;
    a.sites = b.sites = {-2, 0, 2};
    a.x = b.x = {-0.1, 0.0, 0.1};
    a.raw = {0, 0, 0};
    b.raw = {1, 0, 2};
    a.stabilized = b.stabilized = true;
    const DifferenceProfile d = difference_profile(a, b, p);
    CHECK(d.monotone_violations == 1);
    CHECK(d.values[1] == 0.0);
    a.stabilized = false;
    CHECK_THROWS_AS(difference_profile(a, b, p), StabilizationFailed);
}

TEST_CASE("an injected far-field source replaces the computation") {
    const ScalingParams p(60);
    const EnvironmentSpec env{4};
    int calls = 0;
    FarFieldSource src = [&](double xi, double depth, const FieldLayout& l) {
        ++calls;
        return far_field(env, p, xi, depth, l);
    };
    const auto e1 = busemann_profile(env, p, 0.1, 0.0, -0.5, 0.5, 0.0, {4, 8}, 0.0, 1e-9, src);
    const auto e2 = busemann_profile(env, p, 0.1, 0.0, -0.5, 0.5, 0.0, {4, 8});
    CHECK(calls == 2);
    CHECK(e1.raw == e2.raw);
}

TEST_CASE("stationary boundary increments") {
    const BurkeReport r = stationary_boundary_check(1, 0.5, 4000, 100);
    CHECK(r.samples == 4000);
    CHECK(r.ks_p_value > 0.001);
    CHECK(std::abs(r.lag1) < 0.05);
}

TEST_CASE("jump directions bracket a change of the increment") {
    const ScalingParams p(60);
    const EnvironmentSpec env{7};
    const LatticePoint a = lattice_of(p, {-0.3, 0.0}), b = lattice_of(p, {0.3, 0.0});
    const JumpReport j = jump_directions(env, p, a, b, -0.5, 0.5, 0.01, 4.0);
    CHECK(j.left_values.size() == j.directions.size());
    for (size_t i = 0; i < j.directions.size(); ++i) {
        CHECK(j.directions[i] >= -0.5);
        CHECK(j.directions[i] <= 0.5);
        CHECK(j.left_values[i] <= j.right_values[i]);
    }
}
