#include <doctest.h>

#include <cmath>

#include "kpzlab/lpp.hpp"
#include "kpzlab/scaling.hpp"

using namespace kpzlab;

TEST_CASE("scaling constants") {
    CHECK(ScalingParams::c_x == doctest::Approx(std::pow(2.0, 2.0 / 3.0)));
    CHECK(ScalingParams::c_v == doctest::Approx(std::pow(2.0, 4.0 / 3.0)));
    const ScalingParams p(1000);
    CHECK(p.space_unit() == doctest::Approx(ScalingParams::c_x * 100.0));
    CHECK(p.value_scale() == doctest::Approx(ScalingParams::c_v * 10.0));
}

TEST_CASE("invalid n is rejected") { CHECK_THROWS_AS(ScalingParams(0), Error); }

TEST_CASE("lattice images of scaled points") {
    const ScalingParams p(1000);
    const LatticePoint q = to_lattice(p, {0.0, 1.0});
    CHECK(q == LatticePoint{1000, 1000});
    const LatticePoint r = to_lattice(p, {0.5, 1.0});
    CHECK(r.i - r.j == 2 * int64_t(std::lround(0.5 * p.space_unit())));
    const ScaledPoint back = to_scaled(p, r);
    CHECK(back.t == doctest::Approx(1.0));
    CHECK(back.x == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("levels, times and sites") {
    const ScalingParams p(500);
    for (double t : {-1.0, 0.0, 0.3, 1.2}) CHECK(time_of(p, level_of(p, t)) == doctest::Approx(t).epsilon(1e-3));
    const int64_t k = level_of(p, 0.5);
    for (double x : {-0.7, 0.0, 0.25}) {
        const int64_t m = site_of(p, k, x);
        CHECK(((m - k) % 2 == 0));
        CHECK(std::abs(position_of(p, m) - x) <= p.site_spacing());
    }
    const auto g = grid_sites(p, k, -0.5, 0.5, 0.0);
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] - g[i - 1] == 2);
    const auto coarse = grid_sites(p, k, -0.5, 0.5, 0.1);
    CHECK(coarse.size() == 11);
}

TEST_CASE("scaled values remove the linear term") {
    const ScalingParams p(200);
    CHECK(scaled_from_raw(p, 4.0 * 200, 400) == doctest::Approx(0.0));
    CHECK(scaled_from_raw(p, 4.0 * 200 + p.value_scale(), 400) == doctest::Approx(1.0));
    const EnvironmentSpec env{1};
    const double v = scaled_value(env, p, {0, 0}, {0, 1});
    const LatticePoint a = to_lattice(p, {0, 0}), b = to_lattice(p, {0, 1});
    CHECK(v == doctest::Approx(scaled_from_raw(p, lpp_value(env, a, b), b.level() - a.level())));
}

TEST_CASE("points outside the cone are rejected") {
    ScalingParams p(100);
    p.apex_time = 0.0;
    CHECK_THROWS_AS(to_lattice(p, {0.0, -1.0}), ConeError);
}

TEST_CASE("far points lie in the requested direction") {
    const ScalingParams p(1000);
    const LatticePoint v = direction_ray(p, 0.3, 8.0);
    const ScaledPoint s = to_scaled(p, v);
    CHECK(s.t == doctest::Approx(-8.0).epsilon(1e-3));
    CHECK(s.x / 8.0 == doctest::Approx(0.3).epsilon(0.01));
}
