#include "kpzlab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace kpzlab {

namespace {

inline bool same_parity(int64_t a, int64_t b) { return ((a - b) & 1) == 0; }

// Copy values of `prev` at offsets lo-1, lo+1, ..., lo-1+2*count into out, -inf outside.
template <class T>
void gather(const std::vector<T>& src, int64_t src_lo, int64_t src_count, int64_t lo, int64_t count, T fill,
            T* out) {
    for (int64_t r = 0; r < count; ++r) {
        int64_t m = lo + 2 * r;
        int64_t idx = (m - src_lo) / 2;
        out[r] = (m >= src_lo && idx < src_count) ? src[size_t(idx)] : fill;
    }
}

}  // namespace

Window window_on_level(int64_t level, int64_t m_lo, int64_t m_hi) {
    if (!same_parity(m_lo, level)) ++m_lo;
    if (!same_parity(m_hi, level)) --m_hi;
    return {level, m_lo, m_hi};
}

bool MoveTable::covers(int64_t level, int64_t m) const {
    if (level <= base || level > top()) return false;
    size_t k = size_t(level - base - 1);
    return m >= m_lo[k] && m <= m_lo[k] + 2 * (count[k] - 1) && same_parity(m, m_lo[k]);
}

Move MoveTable::at(int64_t level, int64_t m) const {
    if (!covers(level, m)) return Move::Dead;
    size_t k = size_t(level - base - 1);
    int64_t r = (m - m_lo[k]) / 2;
    return Move((bits[k][size_t(r >> 2)] >> (2 * (r & 3))) & 3);
}

std::vector<int64_t> MoveTable::backtrack(int64_t level, int64_t m, int64_t stop, Side side) const {
    if (stop < base || level > top() || stop > level) throw GeometryError("backtrack: levels outside move table");
    std::vector<int64_t> out;
    out.reserve(size_t(level - stop + 1));
    out.push_back(m);
    for (int64_t k = level; k > stop; --k) {
        switch (at(k, m)) {
            case Move::Left: m -= 1; break;
            case Move::Right: m += 1; break;
            case Move::Tie: m += side == Side::Left ? -1 : 1; break;
            case Move::Dead: throw GeometryError("backtrack: unreachable site at level " + std::to_string(k));
        }
        out.push_back(m);
    }
    return out;
}

SweepOutput sweep(const EnvironmentSpec& env, const SweepSpec& spec) {
    const size_t nch = spec.boundary.size();
    if (nch == 0 || spec.boundary[0].empty()) throw GeometryError("sweep: empty boundary");
    for (const auto& b : spec.boundary)
        if (b.size() != spec.boundary[0].size()) throw GeometryError("sweep: channel sizes differ");
    if (!same_parity(spec.source_m_lo, spec.source_level)) throw GeometryError("sweep: source parity");

    const int64_t k0 = spec.source_level;
    const int64_t src_lo = spec.source_m_lo;
    const int64_t src_hi = src_lo + 2 * (int64_t(spec.boundary[0].size()) - 1);

    std::vector<Window> rec;
    rec.reserve(spec.record.size());
    int64_t ktop = k0;
    for (const auto& w0 : spec.record) {
        if (w0.level < k0) throw GeometryError("sweep: record level below source");
        Window w = window_on_level(w0.level, w0.m_lo, w0.m_hi);
        rec.push_back(w);
        if (w.m_lo <= w.m_hi) ktop = std::max(ktop, w.level);
    }
    const int64_t nlev = ktop - k0 + 1;

    constexpr int64_t kBig = std::numeric_limits<int64_t>::max() / 4;
    std::vector<int64_t> hull_lo(size_t(nlev), kBig), hull_hi(size_t(nlev), -kBig);
    for (const auto& w : rec) {
        if (w.m_lo > w.m_hi) continue;
        size_t k = size_t(w.level - k0);
        hull_lo[k] = std::min(hull_lo[k], w.m_lo);
        hull_hi[k] = std::max(hull_hi[k], w.m_hi);
    }
    for (int64_t k = nlev - 2; k >= 0; --k) {
        hull_lo[size_t(k)] = std::min(hull_lo[size_t(k)], hull_lo[size_t(k + 1)] - 1);
        hull_hi[size_t(k)] = std::max(hull_hi[size_t(k)], hull_hi[size_t(k + 1)] + 1);
    }

    SweepOutput out;
    out.channels.assign(nch, {});
    for (size_t c = 0; c < nch; ++c) {
        for (const auto& w : rec) {
            Slice s;
            s.level = w.level;
            s.m_lo = w.m_lo;
            int64_t cnt = w.m_lo <= w.m_hi ? (w.m_hi - w.m_lo) / 2 + 1 : 0;
            s.value.assign(size_t(cnt), kNegInf);
            if (spec.exits) {
                s.exit_left.assign(size_t(cnt), kNoExit);
                s.exit_right.assign(size_t(cnt), kNoExit);
            }
            out.channels[c].push_back(std::move(s));
        }
    }

    const bool want_moves = spec.moves_from.has_value();
    if (want_moves) {
        if (*spec.moves_from < k0) throw GeometryError("sweep: moves below source level");
        out.moves.base = *spec.moves_from;
    }

    int64_t cur_lo = std::max(src_lo, hull_lo[0]);
    int64_t cur_hi = std::min(src_hi, hull_hi[0]);
    int64_t cur_cnt = cur_lo <= cur_hi ? (cur_hi - cur_lo) / 2 + 1 : 0;
    std::vector<std::vector<double>> cur(nch), nxt(nch);
    std::vector<std::vector<int32_t>> xl(nch), xr(nch), nxl(nch), nxr(nch);
    for (size_t c = 0; c < nch; ++c) {
        cur[c].resize(size_t(std::max<int64_t>(cur_cnt, 0)));
        for (int64_t r = 0; r < cur_cnt; ++r) cur[c][size_t(r)] = spec.boundary[c][size_t((cur_lo - src_lo) / 2 + r)];
        if (spec.exits) {
            xl[c].resize(size_t(cur_cnt));
            xr[c].resize(size_t(cur_cnt));
            for (int64_t r = 0; r < cur_cnt; ++r) {
                int32_t m = int32_t(cur_lo + 2 * r);
                bool live = cur[c][size_t(r)] != kNegInf;
                xl[c][size_t(r)] = live ? m : kNoExit;
                xr[c][size_t(r)] = live ? m : kNoExit;
            }
        }
    }

    auto capture = [&](int64_t level) {
        for (size_t ri = 0; ri < rec.size(); ++ri) {
            const Window& w = rec[ri];
            if (w.level != level || w.m_lo > w.m_hi) continue;
            for (size_t c = 0; c < nch; ++c) {
                Slice& s = out.channels[c][ri];
                for (int64_t r = 0; r < s.size(); ++r) {
                    int64_t m = w.m_lo + 2 * r;
                    if (m < cur_lo || m > cur_hi) continue;
                    size_t idx = size_t((m - cur_lo) / 2);
                    s.value[size_t(r)] = cur[c][idx];
                    if (spec.exits) {
                        s.exit_left[size_t(r)] = xl[c][idx];
                        s.exit_right[size_t(r)] = xr[c][idx];
                    }
                }
            }
        }
    };
    capture(k0);

    std::vector<double> wbuf, abuf;
    std::vector<int32_t> albuf, arbuf;
    std::vector<uint8_t> codes, raw;
    int64_t moves_cells = 0;
    for (int64_t k = k0 + 1; k <= ktop; ++k) {
        const int64_t d = k - k0;
        const int64_t lo = std::max(src_lo - d, hull_lo[size_t(d)]);
        const int64_t hi = std::min(src_hi + d, hull_hi[size_t(d)]);
        const int64_t cnt = lo <= hi ? (hi - lo) / 2 + 1 : 0;
        out.cells += cnt;

        if (cnt > 0) {
            wbuf.resize(size_t(cnt));
            weight_run(env, (k + lo) / 2, (k - lo) / 2, cnt, wbuf.data());
        }
        abuf.resize(size_t(cnt + 1));
        for (size_t c = 0; c < nch; ++c) {
            gather(cur[c], cur_lo, cur_cnt, lo - 1, cnt + 1, kNegInf, abuf.data());
            nxt[c].resize(size_t(cnt));
            const double* A = abuf.data();
            const double* W = wbuf.data();
            double* V = nxt[c].data();
            for (int64_t r = 0; r < cnt; ++r) {
                double a = A[r], b = A[r + 1];
                V[r] = W[r] + (a > b ? a : b);
            }
            if (spec.exits) {
                albuf.resize(size_t(cnt + 1));
                arbuf.resize(size_t(cnt + 1));
                gather(xl[c], cur_lo, cur_cnt, lo - 1, cnt + 1, kNoExit, albuf.data());
                gather(xr[c], cur_lo, cur_cnt, lo - 1, cnt + 1, kNoExit, arbuf.data());
                nxl[c].resize(size_t(cnt));
                nxr[c].resize(size_t(cnt));
                for (int64_t r = 0; r < cnt; ++r) {
                    double a = A[r], b = A[r + 1];
                    int32_t el, er;
                    if (a > b) {
                        el = albuf[size_t(r)];
                        er = arbuf[size_t(r)];
                    } else if (b > a) {
                        el = albuf[size_t(r + 1)];
                        er = arbuf[size_t(r + 1)];
                    } else if (a == kNegInf) {
                        el = er = kNoExit;
                    } else {
                        el = std::min(albuf[size_t(r)], albuf[size_t(r + 1)]);
                        er = std::max(arbuf[size_t(r)], arbuf[size_t(r + 1)]);
                    }
                    nxl[c][size_t(r)] = el;
                    nxr[c][size_t(r)] = er;
                }
            }
            if (c == 0 && want_moves && k > out.moves.base) {
                raw.assign(size_t((cnt + 3) / 4 * 4), 0);
                for (int64_t r = 0; r < cnt; ++r) {
                    double a = A[r], b = A[r + 1];
                    raw[size_t(r)] = uint8_t(a > b ? 1 : 0) | uint8_t(b > a ? 2 : 0) | uint8_t(a == kNegInf && b == kNegInf ? 3 : 0);
                }
                codes.resize(size_t((cnt + 3) / 4));
                for (size_t q = 0; q < codes.size(); ++q)
                    codes[q] = uint8_t(raw[4 * q] | (raw[4 * q + 1] << 2) | (raw[4 * q + 2] << 4) | (raw[4 * q + 3] << 6));
                moves_cells += cnt;
                check_cap(moves_cells, "sweep move table");
                out.moves.m_lo.push_back(lo);
                out.moves.count.push_back(cnt);
                out.moves.bits.push_back(codes);
            }
        }
        for (size_t c = 0; c < nch; ++c) {
            std::swap(cur[c], nxt[c]);
            if (spec.exits) {
                std::swap(xl[c], nxl[c]);
                std::swap(xr[c], nxr[c]);
            }
        }
        cur_lo = lo;
        cur_hi = hi;
        cur_cnt = cnt;
        capture(k);
    }
    return out;
}

std::string ValueField::to_csv() const {
    std::string s = "i,j,value\n";
    char buf[96];
    for (int64_t j = rect.lo.j; j <= rect.hi.j; ++j)
        for (int64_t i = rect.lo.i; i <= rect.hi.i; ++i) {
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g\n", (long long)i, (long long)j, at(i, j));
            s += buf;
        }
    return s;
}

double Geodesic::weight(const EnvironmentSpec& env) const {
    double s = 0.0;
    for (size_t k = 1; k < points.size(); ++k) s += kpzlab::weight(env, points[k]);
    return s;
}

std::string Geodesic::to_csv() const {
    std::string s = "step,i,j\n";
    char buf[80];
    for (size_t k = 0; k < points.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%lld,%lld\n", k, (long long)points[k].i, (long long)points[k].j);
        s += buf;
    }
    return s;
}

double lpp_value(const EnvironmentSpec& env, const LatticePoint& p, const LatticePoint& q) {
    if (!dominated(p, q)) throw OrderError("lpp_value: p is not below-left of q");
    if (p == q) return 0.0;
    SweepSpec spec;
    spec.source_level = p.level();
    spec.source_m_lo = p.offset();
    spec.boundary = {{0.0}};
    spec.record = {{q.level(), q.offset(), q.offset()}};
    return sweep(env, spec).channels[0][0].value[0];
}

ValueField value_field_from(const EnvironmentSpec& env, const LatticePoint& p, const LatticeRect& rect) {
    if (rect.width() <= 0 || rect.height() <= 0 || !dominated(p, rect.lo))
        throw GeometryError("value_field_from: source must lie below-left of the rect");
    const int64_t W = rect.hi.i - p.i + 1, H = rect.hi.j - p.j + 1;
    check_cap(W * H, "value_field_from");
    std::vector<double> g(size_t(W * H)), row(static_cast<size_t>(W));
    for (int64_t y = 0; y < H; ++y) {
        weight_row(env, p.i, p.j + y, W, row.data());
        for (int64_t x = 0; x < W; ++x) {
            double best;
            if (x == 0 && y == 0) {
                g[0] = 0.0;
                continue;
            }
            if (x == 0) best = g[size_t((y - 1) * W)];
            else if (y == 0) best = g[size_t(x - 1)];
            else best = std::max(g[size_t(y * W + x - 1)], g[size_t((y - 1) * W + x)]);
            g[size_t(y * W + x)] = row[size_t(x)] + best;
        }
    }
    ValueField f{ValueField::Orientation::FromSource, p, rect, std::vector<double>(size_t(rect.area()))};
    for (int64_t j = rect.lo.j; j <= rect.hi.j; ++j)
        for (int64_t i = rect.lo.i; i <= rect.hi.i; ++i)
            f.values[size_t((j - rect.lo.j) * rect.width() + (i - rect.lo.i))] = g[size_t((j - p.j) * W + (i - p.i))];
    return f;
}

ValueField value_field_to(const EnvironmentSpec& env, const LatticePoint& q, const LatticeRect& rect) {
    if (rect.width() <= 0 || rect.height() <= 0 || !dominated(rect.hi, q))
        throw GeometryError("value_field_to: target must lie above-right of the rect");
    const LatticePoint lo = rect.lo;
    const int64_t W = q.i - lo.i + 1, H = q.j - lo.j + 1;
    check_cap(W * H, "value_field_to");
    std::vector<double> g(size_t(W * H)), above(static_cast<size_t>(W)), row(static_cast<size_t>(W));
    for (int64_t y = H - 1; y >= 0; --y) {
        weight_row(env, lo.i, lo.j + y, W, row.data());
        if (y + 1 < H) weight_row(env, lo.i, lo.j + y + 1, W, above.data());
        for (int64_t x = W - 1; x >= 0; --x) {
            if (x == W - 1 && y == H - 1) {
                g[size_t(y * W + x)] = 0.0;
                continue;
            }
            double best = kNegInf;
            if (x + 1 < W) best = row[size_t(x + 1)] + g[size_t(y * W + x + 1)];
            if (y + 1 < H) best = std::max(best, above[size_t(x)] + g[size_t((y + 1) * W + x)]);
            g[size_t(y * W + x)] = best;
        }
    }
    ValueField f{ValueField::Orientation::ToTarget, q, rect, std::vector<double>(size_t(rect.area()))};
    for (int64_t j = rect.lo.j; j <= rect.hi.j; ++j)
        for (int64_t i = rect.lo.i; i <= rect.hi.i; ++i)
            f.values[size_t((j - rect.lo.j) * rect.width() + (i - rect.lo.i))] =
                g[size_t((j - lo.j) * W + (i - lo.i))];
    return f;
}

Geodesic geodesic(const EnvironmentSpec& env, const LatticePoint& p, const LatticePoint& q, Side side) {
    if (!dominated(p, q)) throw OrderError("geodesic: p is not below-left of q");
    Geodesic g;
    if (p == q) {
        g.points = {p};
        return g;
    }
    SweepSpec spec;
    spec.source_level = p.level();
    spec.source_m_lo = p.offset();
    spec.boundary = {{0.0}};
    spec.record = {{q.level(), q.offset(), q.offset()}};
    spec.moves_from = p.level();
    auto out = sweep(env, spec);
    auto ms = out.moves.backtrack(q.level(), q.offset(), p.level(), side);
    g.points.resize(ms.size());
    for (size_t k = 0; k < ms.size(); ++k) {
        int64_t level = q.level() - int64_t(k);
        g.points[ms.size() - 1 - k] = LatticePoint::from_level(level, ms[k]);
    }
    return g;
}

double composition_residual(const EnvironmentSpec& env, const LatticePoint& p, const LatticePoint& q, int64_t level,
                            Convention convention) {
    if (!dominated(p, q)) throw OrderError("composition_residual: p is not below-left of q");
    if (level <= p.level() || level >= q.level())
        throw GeometryError("composition_residual: level must lie strictly between p and q");
    LatticeRect rect{p, q};
    auto from = value_field_from(env, p, rect);
    auto to = value_field_to(env, q, rect);
    const double total = from.at(q);
    double best = kNegInf;
    for (int64_t i = std::max(p.i, level - q.j); i <= std::min(q.i, level - p.j); ++i) {
        LatticePoint z{i, level - i};
        double v = from.at(z) + to.at(z);
        if (convention == Convention::DoubleCountedTarget) v += weight(env, z);
        best = std::max(best, v);
    }
    return std::abs(total - best);
}

NoBubbleReport no_bubble_scan(const EnvironmentSpec& env, const LatticeRect& rect, int64_t trials,
                              uint64_t sample_seed) {
    std::mt19937_64 rng(sample_seed);
    std::uniform_int_distribution<int64_t> di(rect.lo.i, rect.hi.i), dj(rect.lo.j, rect.hi.j);
    NoBubbleReport rep;
    for (int64_t t = 0; t < trials; ++t) {
        int64_t i1 = di(rng), i2 = di(rng), j1 = dj(rng), j2 = dj(rng);
        LatticePoint p{std::min(i1, i2), std::min(j1, j2)}, q{std::max(i1, i2), std::max(j1, j2)};
        ++rep.trials;
        if (q.level() - p.level() < 2) continue;
        SweepSpec spec;
        spec.source_level = p.level();
        spec.source_m_lo = p.offset();
        spec.boundary = {{0.0}};
        spec.record = {{q.level(), q.offset(), q.offset()}};
        spec.moves_from = p.level();
        auto out = sweep(env, spec);
        auto l = out.moves.backtrack(q.level(), q.offset(), p.level(), Side::Left);
        auto r = out.moves.backtrack(q.level(), q.offset(), p.level(), Side::Right);
        if (l == r) continue;
        ++rep.distinct;
        size_t first = 0, last = l.size() - 1;
        while (l[first] == r[first]) ++first;
        while (l[last] == r[last]) --last;
        // l, r run from q down to p: agreement on both ends over at least two sites.
        if (first >= 2 && last + 3 <= l.size()) ++rep.violations;
    }
    return rep;
}

}  // namespace kpzlab
