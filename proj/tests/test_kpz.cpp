#include <doctest.h>

#include "kpzlab/kpz.hpp"
#include "support.hpp"

using namespace kpzlab;

TEST_CASE("narrow wedge evolution reproduces point-to-point values") {
    const ScalingParams p(100);
    const EnvironmentSpec env{1};
    const auto f = InitialCondition::narrow_wedge(p, 0.0, 0.0);
    const Evolution e = evolve(env, p, f, 0.5, -0.4, 0.4);
    const LatticePoint o = lattice_of(p, {0.0, 0.0});
    for (size_t i = 0; i < e.sites.size(); ++i) {
        const LatticePoint q = LatticePoint::from_level(e.level, e.sites[i]);
        CHECK(e.raw[i] == lpp_value(env, o, q));
        CHECK(e.chi_left[i] == o.offset());
        CHECK(e.chi_right[i] == o.offset());
    }
}

TEST_CASE("exit points are ordered and monotone in the target") {
    const ScalingParams p(100);
    const EnvironmentSpec env{2};
    const auto f = InitialCondition::flat(p, 0.0);
    const Evolution e = evolve(env, p, f, 0.4, -0.5, 0.5);
    for (size_t i = 0; i < e.sites.size(); ++i) {
        CHECK(e.chi_left[i] <= e.chi_right[i]);
        if (i > 0) CHECK(e.chi_left[i - 1] <= e.chi_left[i]);
    }
}

TEST_CASE("property: evolution commutes with adding a constant") {
    const ScalingParams p(80);
    for (uint64_t seed : kpzlab::testing::property_seeds(5, 20)) {
        const EnvironmentSpec env{seed};
        const auto f = InitialCondition::linear(p, 0.0, 0.3);
        const Evolution a = evolve(env, p, f, 0.3, -0.3, 0.3);
        const Evolution b = evolve(env, p, f.shifted(1.5), 0.3, -0.3, 0.3);
        for (size_t i = 0; i < a.values.size(); ++i) CHECK(b.values[i] - a.values[i] == doctest::Approx(1.5));
    }
}

TEST_CASE("property: semigroup on sampled profiles") {
    const ScalingParams p(80);
    for (uint64_t seed : kpzlab::testing::property_seeds(4, 21)) {
        const EnvironmentSpec env{seed};
        const auto f = InitialCondition::narrow_wedge(p, 0.0, 0.0);
        const Evolution mid = evolve(env, p, f, 0.3, -2.0, 2.0);
        const Evolution direct = evolve(env, p, f, 0.6, -0.2, 0.2);
        const auto g = InitialCondition::sampled_raw(mid.level, mid.sites.front(), mid.raw);
        const Evolution two = evolve(env, p, g, 0.6, -0.2, 0.2);
        REQUIRE(direct.sites == two.sites);
        for (size_t i = 0; i < direct.raw.size(); ++i) CHECK(direct.raw[i] == two.raw[i]);
    }
}

TEST_CASE("split evolution halves combine to the full evolution") {
    const ScalingParams p(80);
    const EnvironmentSpec env{3};
    const auto f = InitialCondition::flat(p, 0.0);
    const int64_t k = level_of(p, 0.4), s0 = site_of(p, 0, 0.0);
    const Window w = window_on_level(k, site_of(p, k, -0.2), site_of(p, k, 0.2));
    const SplitEvolution se = split_evolve(env, p, f, s0, {w});
    const Evolution e = evolve_sites(env, p, f, k, w.m_lo, w.m_hi);
    for (int64_t m = w.m_lo; m <= w.m_hi; m += 2)
        CHECK(std::max(se.left[0].at(m), se.right[0].at(m)) == e.raw[size_t((m - w.m_lo) / 2)]);
}

TEST_CASE("d is nondecreasing in x") {
    const ScalingParams p(80);
    const EnvironmentSpec env{4};
    const auto f = InitialCondition::flat(p, 0.0);
    double prev = -1e300;
    for (double x = -0.4; x <= 0.4; x += 0.05) {
        const double d = d_function(env, p, f, 0.0, x, 0.3);
        CHECK(d >= prev - 1e-12);
        prev = d;
    }
}

TEST_CASE("initial conditions") {
    const ScalingParams p(100);
    const auto w = InitialCondition::narrow_wedge(p, 0.0, 0.0);
    CHECK(w.raw(p, site_of(p, 0, 0.0)) == 0.0);
    CHECK(w.raw(p, site_of(p, 0, 0.0) + 2) == kNegInf);
    const auto l = InitialCondition::linear(p, 0.0, 0.5);
    CHECK(l.raw(p, 10) > l.raw(p, -10));
    const auto st = InitialCondition::stationary(p, 0.0, 0.0, 9, -1.0, 1.0);
    CHECK(st.raw(p, site_of(p, 0, 0.0)) == 0.0);
    CHECK(st.truncated());
    CHECK_FALSE(l.describe().empty());
    const Profile pr{0.0, 0, {-4, -2, 0, 2, 4}, {-0.2, -0.1, 0, 0.1, 0.2}, {1, 2, 3, 4, 5}};
    CHECK(pr.subsample(p, 0.0).sites.size() == 5);
}
