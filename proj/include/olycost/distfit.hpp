#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace olycost {

struct LognormalFit {
    double mu = 0.0;
    double sigma = 1.0;  // MLE divisor n
    std::optional<double> truncation_min;
    std::size_t n = 0;
    double log_likelihood = 0.0;
};

struct ParetoFit {
    double xmin = 1.0;   // tail cutoff
    double alpha = 1.0;  // tail exponent
    std::size_t n_tail = 0;
    double log_likelihood = 0.0;
};

struct GpdFit {
    double threshold = 0.0;
    double scale = 1.0;
    double shape = 0.0;
    // 1/shape for shape > 0, +infinity otherwise.
    double implied_alpha = 0.0;
    std::size_t n_exceed = 0;
    double log_likelihood = 0.0;
};

using ModelFit = std::variant<LognormalFit, ParetoFit, GpdFit>;

struct XminCandidate {
    double xmin = 0.0;
    double alpha = 0.0;
    double ks = 0.0;
    std::size_t n_tail = 0;
};

struct XminResult {
    double xmin = 0.0;
    double alpha = 0.0;
    double ks_distance = 0.0;
    std::size_t n_tail = 0;
    std::vector<XminCandidate> scan;
};

// Closed-form lognormal MLE (divisor n). Throws NumericError when the
// log-sample has zero variance, InputError on non-positive values.
LognormalFit fit_lognormal(std::span<const double> sample);

// Kurtosis of the fitted lognormal: e^{4s^2} + 2e^{3s^2} + 3e^{2s^2} - 6.
double lognormal_kurtosis(const LognormalFit& fit);

// Continuous Pareto MLE (Hill): alpha = n / sum ln(x_i / xmin) over the
// tail x_i >= xmin.
ParetoFit fit_pareto_hill(std::span<const double> sample, double xmin);

// Generalized Pareto MLE over exceedances x - threshold, by Nelder-Mead on
// (ln sigma, xi).
GpdFit fit_gpd(std::span<const double> sample, double threshold);

// Lognormal MLE conditioned on x >= xmin, by Nelder-Mead initialized from
// the untruncated fit.
LognormalFit fit_truncated_lognormal(std::span<const double> sample,
                                     double xmin);

// Clauset-style tail cutoff scan: candidates are observed values leaving at
// least min_tail points; the KS-minimal candidate wins, ties broken toward
// the smaller xmin.
XminResult select_xmin(std::span<const double> sample,
                       std::size_t min_tail = 5);

// Max |empirical CDF - model CDF| over the tail points, empirical CDF as
// right-continuous steps at i/n. Truncated models use their conditional CDF.
double ks_distance(std::span<const double> tail, const ModelFit& model);

// P(X >= x) under the fitted model. Pareto reports the conditional tail law
// (x >= xmin). Lognormal uses the plain untruncated law even when the fit
// was truncated; the conditional variant is what ks_distance and the Vuong
// test use internally.
double tail_probability(const ModelFit& model, double x);

// Conditional Pareto tail probability scaled by the empirical tail weight
// n_tail / n_total.
double tail_probability_spliced(const ParetoFit& fit, double x,
                                std::size_t n_total);

// Log density of the model conditioned on x >= xmin (used by the Vuong
// test and by ks_distance for truncated fits).
double log_density_conditional(const ModelFit& model, double x, double xmin);

// Model CDF conditioned on x >= xmin.
double cdf_conditional(const ModelFit& model, double x, double xmin);

// Model CCDF evaluated pointwise over ascending xs.
std::vector<std::pair<double, double>>
model_ccdf(const ModelFit& model, std::span<const double> xs);

} // namespace olycost
