#include "olycost/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "olycost/errors.hpp"
#include "olycost/mathfn.hpp"

namespace olycost {

namespace {

// Average ranks (1-based) with ties sharing the mean rank of their block.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) +
                                  static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double tie_correction_sum(const std::vector<double>& values) {
    std::map<double, std::size_t> counts;
    for (double v : values) ++counts[v];
    double sum = 0.0;
    for (const auto& [value, t] : counts) {
        const double td = static_cast<double>(t);
        sum += td * td * td - td;
    }
    return sum;
}

// Exact distribution of the signed-rank statistic over all 2^m sign
// assignments, computed on doubled ranks so half-ranks stay integral.
// counts[s] = number of assignments with doubled positive-rank sum s.
std::vector<double> signed_rank_distribution(const std::vector<int>& ranks2) {
    int total = 0;
    for (int r : ranks2) total += r;
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    int reach = 0;
    for (int r : ranks2) {
        reach += r;
        for (int s = reach; s >= r; --s) {
            counts[static_cast<std::size_t>(s)] +=
                counts[static_cast<std::size_t>(s - r)];
        }
    }
    return counts;
}

// Exact permutation distribution of the rank sum of a size-k subset of the
// doubled combined ranks. dist[s] = number of subsets of size k with sum s.
std::vector<double> rank_sum_distribution(const std::vector<int>& ranks2,
                                          std::size_t k) {
    int total = 0;
    for (int r : ranks2) total += r;
    std::vector<std::vector<double>> dp(
        k + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    dp[0][0] = 1.0;
    for (int r : ranks2) {
        for (std::size_t c = std::min(k, dp.size() - 1); c >= 1; --c) {
            for (int s = total; s >= r; --s) {
                dp[c][static_cast<std::size_t>(s)] +=
                    dp[c - 1][static_cast<std::size_t>(s - r)];
            }
        }
    }
    return dp[k];
}

double two_sided_from_distribution(const std::vector<double>& counts,
                                   double statistic2) {
    double total = 0.0;
    double below = 0.0;
    double above = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        total += counts[s];
        if (static_cast<double>(s) <= statistic2 + 1e-9) below += counts[s];
        if (static_cast<double>(s) >= statistic2 - 1e-9) above += counts[s];
    }
    return std::min(1.0, 2.0 * std::min(below, above) / total);
}

} // namespace

SummaryStats summary(std::span<const double> sample,
                     std::span<const double> thresholds) {
    if (sample.empty()) throw NumericError("summary: empty sample");
    SummaryStats s;
    s.n = sample.size();
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    double sum = 0.0;
    for (double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    s.median = (s.n % 2 == 1)
                   ? sorted[s.n / 2]
                   : 0.5 * (sorted[s.n / 2 - 1] + sorted[s.n / 2]);
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.sd = (s.n > 1) ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
    for (double t : thresholds) {
        const auto above = std::count_if(sorted.begin(), sorted.end(),
                                         [t](double v) { return v > t; });
        s.prop_above.emplace_back(
            t, static_cast<double>(above) / static_cast<double>(s.n));
    }
    return s;
}

TestResult wilcoxon_signed_rank(std::span<const double> ratios) {
    if (ratios.empty()) throw NumericError("wilcoxon: empty sample");
    std::vector<double> abs_d;
    std::vector<bool> positive;
    for (double r : ratios) {
        const double d = r - 1.0;
        if (d == 0.0) continue;  // zeros dropped before ranking
        abs_d.push_back(std::fabs(d));
        positive.push_back(d > 0.0);
    }
    const std::size_t m = abs_d.size();
    if (m == 0) throw NumericError("wilcoxon: all differences are zero");

    const std::vector<double> ranks = average_ranks(abs_d);
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (positive[i]) v += ranks[i];
    }

    TestResult res;
    res.statistic_name = "V";
    res.statistic = v;
    res.sidedness = Sidedness::two;
    if (m <= 25) {
        std::vector<int> ranks2(m);
        for (std::size_t i = 0; i < m; ++i) {
            ranks2[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
        }
        res.method = TestMethod::exact;
        res.p_value =
            two_sided_from_distribution(signed_rank_distribution(ranks2), 2.0 * v);
    } else {
        const double md = static_cast<double>(m);
        const double mean = md * (md + 1.0) / 4.0;
        const double var = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 -
                           tie_correction_sum(abs_d) / 48.0;
        const double z = (v - mean) / std::sqrt(var);
        res.method = TestMethod::normal_approx;
        res.p_value = 2.0 * mathfn::norm_sf(std::fabs(z));
    }
    return res;
}

TestResult rank_sum(std::span<const double> sample_a,
                    std::span<const double> sample_b) {
    if (sample_a.empty() || sample_b.empty()) {
        throw NumericError("rank_sum: both samples must be nonempty");
    }
    const std::size_t na = sample_a.size();
    const std::size_t nb = sample_b.size();
    std::vector<double> combined(sample_a.begin(), sample_a.end());
    combined.insert(combined.end(), sample_b.begin(), sample_b.end());
    const std::vector<double> ranks = average_ranks(combined);

    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];
    const double u =
        rank_sum_a - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;

    TestResult res;
    res.statistic_name = "W";
    res.statistic = u;
    res.sidedness = Sidedness::two;
    if (na * nb <= 400) {
        std::vector<int> ranks2(combined.size());
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            ranks2[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
        }
        // Distribution of the doubled rank sum; shift to U by the doubled
        // minimum rank sum na(na+1).
        const std::vector<double> dist = rank_sum_distribution(ranks2, na);
        const double shift = static_cast<double>(na) * (static_cast<double>(na) + 1.0);
        res.method = TestMethod::exact;
        res.p_value = two_sided_from_distribution(dist, 2.0 * u + shift);
    } else {
        const double nad = static_cast<double>(na);
        const double nbd = static_cast<double>(nb);
        const double n = nad + nbd;
        const double mean = nad * nbd / 2.0;
        const double var = nad * nbd / 12.0 *
                           ((n + 1.0) - tie_correction_sum(combined) /
                                            (n * (n - 1.0)));
        const double z = (u - mean) / std::sqrt(var);
        res.method = TestMethod::normal_approx;
        res.p_value = 2.0 * mathfn::norm_sf(std::fabs(z));
    }
    return res;
}

TrendFit log_trend(std::span<const std::pair<int, double>> points) {
    if (points.size() < 3) throw InputError("log_trend: need at least 3 points");
    const std::size_t n = points.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].second <= 0.0) {
            throw InputError("log_trend: costs must be positive");
        }
        xs[i] = static_cast<double>(points[i].first);
        ys[i] = std::log(points[i].second);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InputError("log_trend: years are all identical");

    TrendFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ssr += resid * resid;
    }
    const double df = static_cast<double>(n - 2);
    const double se = std::sqrt(ssr / df / sxx);
    if (se == 0.0) {
        fit.t_stat = (fit.slope == 0.0)
                         ? 0.0
                         : std::copysign(std::numeric_limits<double>::infinity(),
                                         fit.slope);
    } else {
        fit.t_stat = fit.slope / se;
    }
    fit.p_value = mathfn::student_t_two_sided_p(fit.t_stat, df);
    return fit;
}

std::vector<std::pair<double, double>>
empirical_ccdf(std::span<const double> sample) {
    if (sample.empty()) throw NumericError("empirical_ccdf: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        // P(X >= x) counts everything from this block upward.
        points.emplace_back(sorted[i],
                            static_cast<double>(sorted.size() - i) / n);
        i = j + 1;
    }
    return points;
}

} // namespace olycost
