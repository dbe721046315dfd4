#include <doctest.h>

#include <random>

#include "kpzlab/lpp.hpp"
#include "support.hpp"

using namespace kpzlab;
using kpzlab::testing::brute_lpp;
using kpzlab::testing::property_seeds;

TEST_CASE("hand-computed oracle on a 2x2 rectangle") {
    const EnvironmentSpec env{42};
    const LatticePoint p{0, 0}, q{1, 1};
    const double w10 = weight(env, {1, 0}), w01 = weight(env, {0, 1}), w11 = weight(env, {1, 1});
    CHECK(lpp_value(env, p, p) == 0.0);
    CHECK(lpp_value(env, p, {1, 0}) == w10);
    CHECK(lpp_value(env, p, q) == std::max(w10, w01) + w11);
}

TEST_CASE("brute force on every rectangle up to 5x5") {
    for (uint64_t seed : property_seeds(4)) {
        const EnvironmentSpec env{seed};
        for (int64_t w = 1; w <= 5; ++w)
            for (int64_t h = 1; h <= 5; ++h) {
                const LatticePoint lo{int64_t(seed % 97), int64_t(seed % 89)}, hi{lo.i + w - 1, lo.j + h - 1};
                REQUIRE(lpp_value(env, lo, hi) == brute_lpp(env, lo, hi));
            }
    }
}

TEST_CASE("geodesics certify the value and are ordered") {
    for (uint64_t seed : property_seeds(6, 1)) {
        const EnvironmentSpec env{seed};
        const LatticePoint p{0, 0}, q{40, 25};
        const double v = lpp_value(env, p, q);
        const Geodesic l = geodesic(env, p, q, Side::Left), r = geodesic(env, p, q, Side::Right);
        CHECK(l.weight(env) == v);
        CHECK(r.weight(env) == v);
        REQUIRE(l.points.size() == size_t(q.level() - p.level() + 1));
        CHECK(l.points.front() == p);
        CHECK(l.points.back() == q);
        for (size_t k = 1; k < l.points.size(); ++k) {
            const LatticePoint d{l.points[k].i - l.points[k - 1].i, l.points[k].j - l.points[k - 1].j};
            CHECK(((d.i == 1 && d.j == 0) || (d.i == 0 && d.j == 1)));
            CHECK(l.points[k].offset() <= r.points[k].offset());
        }
    }
}

TEST_CASE("ties: left and right geodesics bracket all maximizers") {
    EnvironmentSpec env{3};
    env.degenerate = true;
    const LatticePoint p{0, 0}, q{6, 6};
    const Geodesic l = geodesic(env, p, q, Side::Left), r = geodesic(env, p, q, Side::Right);
    CHECK(l.weight(env) == lpp_value(env, p, q));
    CHECK(r.weight(env) == lpp_value(env, p, q));
    for (size_t k = 0; k < l.points.size(); ++k) CHECK(l.points[k].offset() <= r.points[k].offset());
}

TEST_CASE("composition is exact and the double-counted convention is not") {
    for (uint64_t seed : property_seeds(5, 2)) {
        const EnvironmentSpec env{seed};
        const LatticePoint p{0, 0}, q{19, 23};
        for (int64_t k = 1; k < q.level(); k += 3) CHECK(composition_residual(env, p, q, k) == 0.0);
        CHECK(composition_residual(env, p, q, 20, Convention::DoubleCountedTarget) > 0.0);
    }
}

TEST_CASE("value fields match pointwise values") {
    const EnvironmentSpec env{8};
    const LatticePoint p{0, 0};
    const LatticeRect rect{{5, 5}, {12, 9}};
    const ValueField from = value_field_from(env, p, rect);
    const ValueField to = value_field_to(env, {15, 15}, rect);
    for (int64_t i = 5; i <= 12; ++i)
        for (int64_t j = 5; j <= 9; ++j) {
            CHECK(from.at(i, j) == lpp_value(env, p, {i, j}));
            CHECK(to.at(i, j) == lpp_value(env, {i, j}, {15, 15}));
        }
}

TEST_CASE("property: superadditivity along random chains") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int64_t> step(0, 12);
    for (uint64_t seed : property_seeds(30, 3)) {
        const EnvironmentSpec env{seed};
        const LatticePoint a{0, 0}, b{step(rng), step(rng)}, c{b.i + step(rng), b.j + step(rng)};
        CHECK(lpp_value(env, a, c) >= lpp_value(env, a, b) + lpp_value(env, b, c));
    }
}

TEST_CASE("property: monotone in the weights' support") {
    for (uint64_t seed : property_seeds(20, 4)) {
        const EnvironmentSpec env{seed};
        CHECK(lpp_value(env, {0, 0}, {10, 11}) <= lpp_value(env, {0, 0}, {10, 12}));
        CHECK(lpp_value(env, {0, 0}, {10, 11}) <= lpp_value(env, {0, 0}, {11, 11}));
    }
}

TEST_CASE("sweep records windows and move tables backtrack to the source") {
    const EnvironmentSpec env{6};
    SweepSpec spec;
    spec.source_level = 0;
    spec.source_m_lo = 0;
    spec.boundary = {{0.0}};
    spec.record = {window_on_level(30, -10, 10)};
    spec.moves_from = 0;
    const SweepOutput out = sweep(env, spec);
    const Slice& s = out.channels[0][0];
    CHECK(s.level == 30);
    for (int64_t m = s.m_lo; m <= s.m_hi(); m += 2) CHECK(s.at(m) == lpp_value(env, {0, 0}, LatticePoint::from_level(30, m)));
    const auto path = out.moves.backtrack(30, 0, 0, Side::Left);
    CHECK(path.size() == 31);
    CHECK(path.back() == 0);
}

TEST_CASE("slice addressing") {
    Slice s;
    s.level = 4;
    s.m_lo = -2;
    s.value = {1, 2, 3};
    CHECK(s.m_hi() == 2);
    CHECK(s.contains(0));
    CHECK_FALSE(s.contains(1));
    CHECK(s.at(2) == 3);
    CHECK(s.at(4) == kNegInf);
    const Window w = window_on_level(5, -4, 4);
    CHECK((w.m_lo - 5) % 2 == 0);
    CHECK(w.m_lo >= -4);
    CHECK(w.m_hi <= 4);
}

TEST_CASE("no-bubble scan finds no violations in a generic environment") {
    const NoBubbleReport r = no_bubble_scan(EnvironmentSpec{4}, {{0, 0}, {29, 29}}, 100);
    CHECK(r.trials == 100);
    CHECK(r.violations == 0);
}
