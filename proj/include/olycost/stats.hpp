#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace olycost {

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;  // divisor n-1
    double min = 0.0;
    double max = 0.0;
    // (threshold, fraction of sample strictly above it)
    std::vector<std::pair<double, double>> prop_above;
};

enum class Sidedness { one, two };
enum class TestMethod { exact, normal_approx };

struct TestResult {
    std::string statistic_name;
    double statistic = 0.0;
    double p_value = 1.0;
    Sidedness sidedness = Sidedness::two;
    TestMethod method = TestMethod::exact;
};

struct TrendFit {
    double slope = 0.0;  // per year, on the log-cost scale
    double intercept = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

// Mean, median (midpoint for even n), sd, extremes and strict-threshold
// exceedance proportions. Throws NumericError on an empty sample.
SummaryStats summary(std::span<const double> sample,
                     std::span<const double> thresholds = {});

// One-sample Wilcoxon signed-rank test of ratios against 1. Zeros dropped,
// ties get average ranks. Exact two-sided p from the full sign-assignment
// distribution for n <= 25, normal approximation with tie correction above.
TestResult wilcoxon_signed_rank(std::span<const double> ratios);

// Mann-Whitney rank-sum test. Statistic is U for sample_a. Exact p from the
// permutation distribution when n_a*n_b <= 400, else normal approximation
// with tie correction.
TestResult rank_sum(std::span<const double> sample_a,
                    std::span<const double> sample_b);

// OLS of ln(cost) on year with a t-test on the slope (n-2 df).
TrendFit log_trend(std::span<const std::pair<int, double>> points);

// Points (x, P(X >= x)) over sorted distinct sample values; the first point
// always has p = 1.
std::vector<std::pair<double, double>>
empirical_ccdf(std::span<const double> sample);

} // namespace olycost
