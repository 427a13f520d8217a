#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "olycost/distfit.hpp"
#include "olycost/errors.hpp"
#include "olycost/mathfn.hpp"
#include "olycost/sim.hpp"

using namespace olycost;

namespace {

std::vector<double> tail_of(std::span<const double> sample, double xmin) {
    std::vector<double> tail;
    for (double x : sample) {
        if (x >= xmin) tail.push_back(x);
    }
    std::sort(tail.begin(), tail.end());
    return tail;
}

} // namespace

TEST_CASE("lognormal MLE matches the closed form on a constructed sample") {
    // Logs are {-1, 0, 1, 2}: mu = 0.5, sigma^2 = mean of squared deviations.
    const std::vector<double> sample = {std::exp(-1.0), 1.0, std::exp(1.0),
                                        std::exp(2.0)};
    const LognormalFit fit = fit_lognormal(sample);
    CHECK(fit.mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.sigma == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
    CHECK(fit.n == 4);
    CHECK_FALSE(fit.truncation_min.has_value());

    CHECK_THROWS_AS(fit_lognormal(std::vector<double>{1.0, 1.0, 1.0}),
                    NumericError);
    CHECK_THROWS_AS(fit_lognormal(std::vector<double>{1.0, -2.0}), InputError);
}

TEST_CASE("lognormal kurtosis follows the moment formula") {
    LognormalFit fit;
    fit.mu = 0.0;
    fit.sigma = 0.5;
    const double s2 = 0.25;
    const double expected = std::exp(4.0 * s2) + 2.0 * std::exp(3.0 * s2) +
                            3.0 * std::exp(2.0 * s2) - 6.0;
    CHECK(lognormal_kurtosis(fit) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("hill estimator matches its closed form and is scale equivariant") {
    const std::vector<double> sample = {1.0, 2.0, 4.0, 8.0};
    const ParetoFit fit = fit_pareto_hill(sample, 1.0);
    CHECK(fit.alpha == doctest::Approx(4.0 / (6.0 * std::log(2.0))));
    CHECK(fit.n_tail == 4);

    // Scaling the sample and the cutoff together leaves alpha unchanged.
    std::vector<double> scaled;
    for (double x : sample) scaled.push_back(17.3 * x);
    CHECK(fit_pareto_hill(scaled, 17.3).alpha ==
          doctest::Approx(fit.alpha).epsilon(1e-12));

    // Cutoff above every point leaves no tail.
    CHECK_THROWS_AS(fit_pareto_hill(sample, 100.0), InputError);
}

TEST_CASE("hill estimator recovers the exponent of synthetic pareto data") {
    const SimDistribution dist{DistKind::pareto, 1.7, 1.0};
    const std::vector<double> draws = sample(dist, 20000, 11);
    const ParetoFit fit = fit_pareto_hill(draws, 1.0);
    CHECK(fit.alpha == doctest::Approx(1.7).epsilon(0.03));
}

TEST_CASE("gpd fit recovers synthetic shape and scale") {
    // Inverse-CDF draws from GPD(shape 0.5, scale 1) above threshold 0.
    const SimDistribution uniform{DistKind::pareto, 1.0, 1.0};
    std::vector<double> draws;
    const std::vector<double> us = sample(uniform, 10000, 23);
    draws.reserve(us.size());
    for (double v : us) {
        const double u = 1.0 / v;  // uniform on (0, 1)
        draws.push_back((std::pow(u, -0.5) - 1.0) / 0.5);
    }
    const GpdFit fit = fit_gpd(draws, 0.0);
    CHECK(fit.shape == doctest::Approx(0.5).epsilon(0.15));
    CHECK(fit.scale == doctest::Approx(1.0).epsilon(0.1));
    CHECK(fit.implied_alpha == doctest::Approx(1.0 / fit.shape));
    CHECK(fit.n_exceed == draws.size());
}

TEST_CASE("truncated lognormal fit recovers parameters of truncated data") {
    const SimDistribution dist{DistKind::lognormal, 0.8, 0.6};
    const std::vector<double> draws = sample(dist, 30000, 31);
    const std::vector<double> tail = tail_of(draws, 2.0);
    const LognormalFit fit = fit_truncated_lognormal(tail, 2.0);
    REQUIRE(fit.truncation_min.has_value());
    CHECK(*fit.truncation_min == 2.0);
    CHECK(fit.mu == doctest::Approx(0.8).epsilon(0.08));
    CHECK(fit.sigma == doctest::Approx(0.6).epsilon(0.08));
}

TEST_CASE("xmin scan matches an exhaustive oracle") {
    const std::vector<double> data = {1.02, 1.13, 1.24, 1.49, 1.56, 1.65, 1.76,
                                      2.02, 2.18, 2.24, 2.51, 2.66, 3.13, 3.66,
                                      3.77, 3.89, 4.24, 4.52, 8.2};
    const XminResult result = select_xmin(data);

    // Oracle: recompute Hill + KS for every candidate left-to-right.
    double best_ks = 1e9;
    double best_xmin = 0.0;
    std::vector<double> sorted(data);
    std::sort(sorted.begin(), sorted.end());
    for (double candidate : sorted) {
        const std::vector<double> tail = tail_of(sorted, candidate);
        if (tail.size() < 5) continue;
        double log_sum = 0.0;
        for (double x : tail) log_sum += std::log(x / candidate);
        if (log_sum <= 0.0) continue;
        const double alpha = static_cast<double>(tail.size()) / log_sum;
        double ks = 0.0;
        const double n = static_cast<double>(tail.size());
        for (std::size_t i = 0; i < tail.size(); ++i) {
            // Evaluate at the end of each tie block, like a right-continuous
            // step function.
            if (i + 1 < tail.size() && tail[i + 1] == tail[i]) continue;
            const double emp = static_cast<double>(i + 1) / n;
            const double model = 1.0 - std::pow(tail[i] / candidate, -alpha);
            ks = std::max(ks, std::fabs(emp - model));
        }
        if (ks < best_ks - 1e-15) {
            best_ks = ks;
            best_xmin = candidate;
        }
    }
    CHECK(result.xmin == doctest::Approx(best_xmin));
    CHECK(result.ks_distance == doctest::Approx(best_ks).epsilon(1e-12));
    CHECK_FALSE(result.scan.empty());
    for (const XminCandidate& c : result.scan) CHECK(c.n_tail >= 5);
}

TEST_CASE("ks distance is zero for a perfectly matching step function") {
    // Points at exact conditional-Pareto quantiles i/n give small KS.
    ParetoFit fit;
    fit.xmin = 1.0;
    fit.alpha = 2.0;
    std::vector<double> tail;
    const int n = 100;
    for (int i = 1; i <= n; ++i) {
        const double u = (static_cast<double>(i) - 0.5) / n;
        tail.push_back(std::pow(1.0 - u, -1.0 / 2.0));
    }
    std::sort(tail.begin(), tail.end());
    const double d = ks_distance(tail, ModelFit(fit));
    CHECK(d >= 0.0);
    CHECK(d <= 0.01);
}

TEST_CASE("tail probabilities follow the fitted laws") {
    ParetoFit pareto;
    pareto.xmin = 1.5;
    pareto.alpha = 2.0;
    pareto.n_tail = 10;
    CHECK(tail_probability(ModelFit(pareto), 1.5) == doctest::Approx(1.0));
    CHECK(tail_probability(ModelFit(pareto), 3.0) == doctest::Approx(0.25));
    CHECK(tail_probability_spliced(pareto, 3.0, 20) == doctest::Approx(0.125));

    LognormalFit lognormal;
    lognormal.mu = 0.0;
    lognormal.sigma = 1.0;
    CHECK(tail_probability(ModelFit(lognormal), 1.0) == doctest::Approx(0.5));
    // The plain law is reported even for truncated lognormal fits.
    lognormal.truncation_min = 1.5;
    CHECK(tail_probability(ModelFit(lognormal), 1.0) == doctest::Approx(0.5));

    // Monotone decreasing in x.
    double prev = 1.1;
    for (double x = 1.5; x < 10.0; x += 0.5) {
        const double p = tail_probability(ModelFit(pareto), x);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("conditional log density integrates to one over the tail") {
    LognormalFit trunc;
    trunc.mu = 0.5;
    trunc.sigma = 0.7;
    trunc.truncation_min = 1.5;
    const ModelFit model(trunc);
    const double total = mathfn::integrate(
        [&](double x) { return std::exp(log_density_conditional(model, x, 1.5)); },
        1.5, 200.0, 1e-9);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-5));

    ParetoFit pareto;
    pareto.xmin = 1.5;
    pareto.alpha = 1.7;
    const ModelFit pmodel(pareto);
    const double ptotal = mathfn::integrate(
        [&](double x) {
            return std::exp(log_density_conditional(pmodel, x, 1.5));
        },
        1.5, 1e5, 1e-9);
    CHECK(ptotal == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("model ccdf is consistent with cdf_conditional") {
    ParetoFit pareto;
    pareto.xmin = 1.0;
    pareto.alpha = 2.0;
    const std::vector<double> xs = {1.0, 2.0, 4.0};
    const auto curve = model_ccdf(ModelFit(pareto), xs);
    REQUIRE(curve.size() == 3);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(curve[i].second ==
              doctest::Approx(1.0 - cdf_conditional(ModelFit(pareto), xs[i], 1.0))
                  .epsilon(1e-12));
    }
}
