#pragma once

#include <functional>
#include <random>
#include <vector>

#include "kpzlab/lpp.hpp"

namespace kpzlab::testing {

// Exhaustive maximum over up-right paths from lo to hi, start vertex excluded.
inline double brute_lpp(const EnvironmentSpec& env, const LatticePoint& lo, const LatticePoint& hi) {
    double best = kNegInf;
    std::function<void(LatticePoint, double)> walk = [&](LatticePoint c, double acc) {
        if (c == hi) {
            best = std::max(best, acc);
            return;
        }
        if (c.i < hi.i) walk({c.i + 1, c.j}, acc + weight(env, {c.i + 1, c.j}));
        if (c.j < hi.j) walk({c.i, c.j + 1}, acc + weight(env, {c.i, c.j + 1}));
    };
    walk(lo, 0.0);
    return best;
}

// Seeds for hand-rolled property tests.
inline std::vector<uint64_t> property_seeds(size_t count, uint64_t salt = 0) {
    std::mt19937_64 rng(0x5eed + salt);
    std::vector<uint64_t> out(count);
    for (auto& s : out) s = rng();
    return out;
}

}  // namespace kpzlab::testing
