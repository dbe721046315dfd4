#include "kpzlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kpzlab::stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / double(v.size() - 1);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = std::min(a.size(), b.size());
    if (n < 2) return 0.0;
    double ma = 0, mb = 0;
    for (size_t k = 0; k < n; ++k) {
        ma += a[k];
        mb += b[k];
    }
    ma /= double(n);
    mb /= double(n);
    double sab = 0, saa = 0, sbb = 0;
    for (size_t k = 0; k < n; ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double lag1_correlation(const std::vector<double>& v) {
    if (v.size() < 3) return 0.0;
    std::vector<double> a(v.begin(), v.end() - 1), b(v.begin() + 1, v.end());
    return correlation(a, b);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = std::min(x.size(), y.size());
    double mx = 0, my = 0;
    for (size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0;
    for (size_t k = 0; k < n; ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

double kolmogorov_tail(double lambda) {
    if (lambda < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = double(sample.size());
    double d = 0.0;
    for (size_t k = 0; k < sample.size(); ++k) {
        double f = cdf(sample[k]);
        d = std::max({d, double(k + 1) / n - f, f - double(k) / n});
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_test(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = double(a.size()), nb = double(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace kpzlab::stats
