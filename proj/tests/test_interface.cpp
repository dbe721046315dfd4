#include <doctest.h>

#include "kpzlab/interface.hpp"
#include "support.hpp"

using namespace kpzlab;

namespace {

InterfaceTrace synthetic(const std::vector<std::pair<int64_t, int64_t>>& pairs) {
    InterfaceTrace t;
    for (size_t k = 0; k < pairs.size(); ++k) {
        t.levels.push_back(int64_t(k));
        t.times.push_back(double(k));
        t.minus.push_back(Position::at(pairs[k].first));
        t.plus.push_back(Position::at(pairs[k].second));
    }
    return t;
}

}  // namespace

TEST_CASE("positions order sentinels around finite values") {
    const Position a = Position::at(-3), b = Position::at(4);
    CHECK(Position::minus_inf() < a);
    CHECK(a < b);
    CHECK(b < Position::plus_inf());
    CHECK(a <= a);
    CHECK_FALSE(b < a);
    CHECK_THROWS_AS(Position::plus_inf().m(), GeometryError);
    CHECK(Position::minus_inf().str() == "-inf");
    CHECK(same_cell(Position::at(2), Position::at(4)));
    CHECK_FALSE(same_cell(Position::at(2), Position::at(6)));
    CHECK(same_cell(Position::plus_inf(), Position::plus_inf()));
}

TEST_CASE("gaps snap to neighbouring sites") {
    CHECK(grid_site(Position::at(4), 10, true) == 4);
    CHECK(grid_site(Position::at(5), 10, true) == 6);
    CHECK(grid_site(Position::at(5), 10, false) == 4);
}

TEST_CASE("interface positions from a d profile") {
    DProfile dp;
    dp.level = 0;
    dp.m_lo = -4;
    dp.d = {-3, -1, 0, 0, 2};
    dp.h = {0, 0, 0, 0, 0};
    const auto [lo, hi] = interface_positions(dp, 1e-9);
    CHECK(lo <= hi);
    CHECK(lo.finite());
    CHECK(hi.finite());
}

TEST_CASE("bubbles: split and re-meet") {
    const auto t = synthetic({{0, 0}, {0, 0}, {-4, 6}, {-4, 8}, {2, 2}, {2, 2}});
    const auto b = bubble_search(t);
    REQUIRE(b.size() == 1);
    CHECK(b[0].open == 1);
    CHECK(b[0].close == 4);
    CHECK(b[0].persists);
    CHECK(b[0].interior());
    CHECK(bubble_search(synthetic({{0, 0}, {0, 0}, {0, 2}})).empty());
    CHECK(t.ordering_violations() == 0);
    CHECK(synthetic({{3, 1}}).ordering_violations() == 1);
}

TEST_CASE("split sets flag the jumps of D") {
    DifferenceProfile d;
    d.sites = {0, 2, 4, 6, 8};
    d.x = {0, 1, 2, 3, 4};
    d.values = {0, 0, 1, 1, 3};
    const SplitSet s = split_set(d, 1e-6);
    CHECK(s.count_L() == 2);
    CHECK(s.count_R() == 2);
    CHECK(s.is_L[2]);
    CHECK(s.is_R[1]);
    CHECK(s.is_M[2] == 0);
    CHECK(s.intervals.size() == 3);
}

TEST_CASE("meeting report on identical traces") {
    const auto t = synthetic({{0, 2}, {0, 2}, {1, 3}});
    const MeetingReport r = meeting_and_ordering(t, t);
    CHECK(r.ordering_violations == 0);
}

TEST_CASE("mixed interfaces are ordered and restart consistently") {
    const ScalingParams p(150);
    const EnvironmentSpec env{11};
    const MixedSetup S = mixed_setup(env, p, -0.2, 0.2, {0.0, 0.2, 0.4, 0.6}, -0.3, 0.3, {8, 16});
    const InterfaceTrace tr = mixed_interface(env, p, S, 0.0, 0.0);
    CHECK(tr.size() == 4);
    CHECK(tr.ordering_violations() == 0);
    CHECK(tr.mv_residual < 1e-6);
    for (size_t r = 1; r + 1 < tr.size(); ++r) CHECK(semigroup_check(env, p, S, tr, r).worst() == 0.0);
}

TEST_CASE("property: interfaces of a flat start are ordered") {
    const ScalingParams p(100);
    for (uint64_t seed : kpzlab::testing::property_seeds(5, 30)) {
        const EnvironmentSpec env{seed};
        const auto tr = interface(env, p, InitialCondition::flat(p, 0.0), 0.0, {0.0, 0.1, 0.2, 0.3});
        CHECK(tr.ordering_violations() == 0);
    }
}
