#include <doctest.h>

#include <cmath>
#include <set>

#include "kpzlab/env.hpp"
#include "support.hpp"

using namespace kpzlab;

TEST_CASE("weights are deterministic functions of seed and vertex") {
    const EnvironmentSpec a{7}, b{7}, c{8};
    CHECK(weight(a, {3, 4}) == weight(b, {3, 4}));
    CHECK(weight(a, {3, 4}) != weight(c, {3, 4}));
    CHECK(weight(a, {3, 4}) != weight(a, {4, 3}));
    CHECK(vertex_hash(7, 3, 4) == vertex_hash(7, 3, 4));
}

TEST_CASE("weights are positive odd multiples of 2^-33") {
    const EnvironmentSpec env{11};
    for (int64_t i = -20; i < 20; ++i)
        for (int64_t j = -20; j < 20; ++j) {
            const double w = weight(env, {i, j});
            REQUIRE(w > 0.0);
            const double q = std::ldexp(w, 33);
            REQUIRE(q == std::floor(q));
            REQUIRE(std::fmod(q, 2.0) == 1.0);
        }
}

TEST_CASE("sums of quantized weights are exact in any order") {
    const EnvironmentSpec env{3};
    std::vector<double> w;
    for (int64_t i = 0; i < 2000; ++i) w.push_back(weight(env, {i, 0}));
    double fwd = 0, bwd = 0;
    for (double x : w) fwd += x;
    for (auto it = w.rbegin(); it != w.rend(); ++it) bwd += *it;
    CHECK(fwd == bwd);
}

TEST_CASE("run, row and block accessors agree with pointwise weights") {
    const EnvironmentSpec env{5};
    std::vector<double> run(17), row(13);
    weight_run(env, -4, 9, 17, run.data());
    for (int64_t r = 0; r < 17; ++r) CHECK(run[size_t(r)] == weight(env, {-4 + r, 9 - r}));
    weight_row(env, 2, -3, 13, row.data());
    for (int64_t r = 0; r < 13; ++r) CHECK(row[size_t(r)] == weight(env, {2 + r, -3}));
    const WeightBlock blk = weight_block(env, {{1, 2}, {6, 4}});
    CHECK(blk.values.size() == 18);
    CHECK(blk.at(4, 3) == weight(env, {4, 3}));
}

TEST_CASE("exponential moments") {
    const EnvironmentSpec env{1, 2.0};
    double s = 0, s2 = 0;
    const int64_t N = 200000;
    for (int64_t i = 0; i < N; ++i) {
        const double w = weight(env, {i, 1});
        s += w;
        s2 += w * w;
    }
    const double mean = s / double(N), var = s2 / double(N) - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("degenerate environment has two values") {
    EnvironmentSpec env{9};
    env.degenerate = true;
    std::set<double> seen;
    for (int64_t i = 0; i < 200; ++i) {
        const double w = weight(env, {i, i});
        CHECK((std::abs(w - 1.0) < 1e-9 || std::abs(w - 2.0) < 1e-9));
        seen.insert(w);
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("memory cap") {
    const int64_t old = memory_cap();
    set_memory_cap(100);
    CHECK_THROWS_AS(check_cap(101, "test"), CapExceeded);
    CHECK_NOTHROW(check_cap(100, "test"));
    set_memory_cap(old);
}

TEST_CASE("lattice point coordinates") {
    const LatticePoint p{7, 3};
    CHECK(p.level() == 10);
    CHECK(p.offset() == 4);
    CHECK(LatticePoint::from_level(10, 4) == p);
    CHECK(dominated({1, 1}, {2, 1}));
    CHECK_FALSE(dominated({3, 1}, {2, 5}));
    const LatticeRect r{{0, 0}, {3, 2}};
    CHECK(r.area() == 12);
    CHECK(r.contains({3, 2}));
    CHECK_FALSE(r.contains({4, 0}));
}
