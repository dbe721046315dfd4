#pragma once

#include <functional>
#include <vector>

namespace kpzlab::stats {

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);
double lag1_correlation(const std::vector<double>& v);
double correlation(const std::vector<double>& a, const std::vector<double>& b);

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
// Two-sample test.
KsResult ks_test(std::vector<double> a, std::vector<double> b);
// Asymptotic Kolmogorov tail P(K > lambda).
double kolmogorov_tail(double lambda);

}  // namespace kpzlab::stats
