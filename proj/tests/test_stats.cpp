#include <doctest.h>

#include <cmath>
#include <random>

#include "kpzlab/stats.hpp"

using namespace kpzlab::stats;

TEST_CASE("moments and slope") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(mean(v) == doctest::Approx(2.5));
    CHECK(variance(v) == doctest::Approx(5.0 / 3.0));
    CHECK(slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
    CHECK(correlation({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(lag1_correlation({1, -1, 1, -1, 1, -1}) < -0.8);
}

TEST_CASE("Kolmogorov tail values") {
    CHECK(kolmogorov_tail(1.3581) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(kolmogorov_tail(1.6276) == doctest::Approx(0.01).epsilon(0.02));
    CHECK(kolmogorov_tail(0.0) == doctest::Approx(1.0));
}

TEST_CASE("KS accepts the right law and rejects a wrong one") {
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> s(5000);
    for (auto& x : s) x = e(rng);
    const auto ok = ks_test(s, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
    const auto bad = ks_test(s, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-1.3 * x); });
    CHECK(ok.p_value > 0.01);
    CHECK(bad.p_value < 1e-6);
    std::vector<double> t(5000);
    for (auto& x : t) x = e(rng);
    CHECK(ks_test(s, t).p_value > 0.01);
}
