#include <doctest.h>

#include "kpzlab/geodesy.hpp"
#include "support.hpp"

using namespace kpzlab;

TEST_CASE("rays are certified up-right paths") {
    const ScalingParams p(100);
    const EnvironmentSpec env{1};
    const GeodesicRay r = ray(env, p, 0.2, {0.0, 0.0}, Side::Left, {4, 8});
    REQUIRE(r.size() > 1);
    CHECK(r.certified);
    CHECK(r.levels.front() == r.root_level);
    for (size_t k = 1; k < r.size(); ++k) {
        CHECK(r.levels[k] == r.levels[k - 1] - 1);
        CHECK(std::abs(r.m[k] - r.m[k - 1]) == 1);
    }
    CHECK(r.to_csv(p).find('\n') != std::string::npos);
}

TEST_CASE("left and right rays from one root are ordered") {
    const ScalingParams p(100);
    for (uint64_t seed : kpzlab::testing::property_seeds(5, 40)) {
        const EnvironmentSpec env{seed};
        const auto l = ray(env, p, 0.0, {0.0, 0.0}, Side::Left, {4, 8});
        const auto r = ray(env, p, 0.0, {0.0, 0.0}, Side::Right, {4, 8});
        for (size_t k = 0; k < std::min(l.size(), r.size()); ++k) CHECK(l.m[k] <= r.m[k]);
    }
}

TEST_CASE("ordering sweep: no violations, and swapped labels are detected") {
    const ScalingParams p(200);
    const EnvironmentSpec env{2};
    const int64_t k = level_of(p, 0.0);
    std::vector<int64_t> roots;
    for (double x : {-0.4, -0.2, 0.0, 0.2, 0.4}) roots.push_back(site_of(p, k, x));
    const auto ok = ordering_sweep(env, p, {-0.6, 0.0, 0.6}, k, roots, {4, 8});
    CHECK(ok.checks > 1000);
    CHECK(ok.violations == 0);
    const auto bad = ordering_sweep(env, p, {-0.6, 0.0, 0.6}, k, roots, {4, 8}, true);
    CHECK(bad.violations > 0);
}

TEST_CASE("coalescence of synthetic rays") {
    GeodesicRay a, b;
    a.levels = b.levels = {5, 4, 3, 2};
    a.m = {-1, 0, 1, 0};
    b.m = {3, 2, 1, 0};
    a.root_level = b.root_level = 5;
    const auto c = coalescence(a, b);
    REQUIRE(c.has_value());
    CHECK(c->level == 3);
    CHECK(split_levels(a, b) == 2);
}
