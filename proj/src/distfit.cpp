#include "olycost/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "olycost/errors.hpp"
#include "olycost/mathfn.hpp"
#include "olycost/nelder_mead.hpp"

namespace olycost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> tail_values(std::span<const double> sample, double xmin) {
    std::vector<double> tail;
    for (double x : sample) {
        if (x >= xmin) tail.push_back(x);
    }
    return tail;
}

void require_positive(std::span<const double> sample, const char* who) {
    for (double x : sample) {
        if (!(x > 0.0)) {
            throw InputError(std::string(who) + ": sample values must be > 0");
        }
    }
}

double lognormal_log_likelihood(std::span<const double> values, double mu,
                                double sigma) {
    double ll = 0.0;
    for (double x : values) {
        const double z = (std::log(x) - mu) / sigma;
        ll += mathfn::norm_log_pdf(z) - std::log(x) - std::log(sigma);
    }
    return ll;
}

// Unconditional log density and survival function per model family.

double model_logpdf(const LognormalFit& m, double x) {
    const double z = (std::log(x) - m.mu) / m.sigma;
    return mathfn::norm_log_pdf(z) - std::log(x) - std::log(m.sigma);
}

double model_sf(const LognormalFit& m, double x) {
    return mathfn::norm_sf((std::log(x) - m.mu) / m.sigma);
}

double model_logpdf(const ParetoFit& m, double x) {
    return std::log(m.alpha) + m.alpha * std::log(m.xmin) -
           (m.alpha + 1.0) * std::log(x);
}

double model_sf(const ParetoFit& m, double x) {
    if (x <= m.xmin) return 1.0;
    return std::pow(m.xmin / x, m.alpha);
}

double model_logpdf(const GpdFit& m, double x) {
    const double y = x - m.threshold;
    if (y < 0.0) return -kInf;
    if (std::fabs(m.shape) < 1e-12) {
        return -std::log(m.scale) - y / m.scale;
    }
    const double z = 1.0 + m.shape * y / m.scale;
    if (z <= 0.0) return -kInf;
    return -std::log(m.scale) - (1.0 / m.shape + 1.0) * std::log(z);
}

double model_sf(const GpdFit& m, double x) {
    const double y = x - m.threshold;
    if (y <= 0.0) return 1.0;
    if (std::fabs(m.shape) < 1e-12) return std::exp(-y / m.scale);
    const double z = 1.0 + m.shape * y / m.scale;
    if (z <= 0.0) return 0.0;
    return std::pow(z, -1.0 / m.shape);
}

} // namespace

LognormalFit fit_lognormal(std::span<const double> sample) {
    if (sample.size() < 2) throw InputError("fit_lognormal: need n >= 2");
    require_positive(sample, "fit_lognormal");
    const double n = static_cast<double>(sample.size());
    double sum = 0.0;
    for (double x : sample) sum += std::log(x);
    const double mu = sum / n;
    double ss = 0.0;
    for (double x : sample) {
        const double d = std::log(x) - mu;
        ss += d * d;
    }
    const double sigma = std::sqrt(ss / n);  // MLE divisor n
    if (sigma <= 0.0) {
        throw NumericError("fit_lognormal: degenerate sample (zero variance)");
    }
    LognormalFit fit;
    fit.mu = mu;
    fit.sigma = sigma;
    fit.n = sample.size();
    fit.log_likelihood = lognormal_log_likelihood(sample, mu, sigma);
    return fit;
}

double lognormal_kurtosis(const LognormalFit& fit) {
    const double s2 = fit.sigma * fit.sigma;
    return std::exp(4.0 * s2) + 2.0 * std::exp(3.0 * s2) +
           3.0 * std::exp(2.0 * s2) - 6.0;
}

ParetoFit fit_pareto_hill(std::span<const double> sample, double xmin) {
    if (!(xmin > 0.0)) throw InputError("fit_pareto_hill: xmin must be > 0");
    require_positive(sample, "fit_pareto_hill");
    const std::vector<double> tail = tail_values(sample, xmin);
    if (tail.size() < 2) {
        throw InputError("fit_pareto_hill: fewer than 2 values >= xmin");
    }
    double log_sum = 0.0;
    for (double x : tail) log_sum += std::log(x / xmin);
    if (log_sum <= 0.0) {
        throw NumericError("fit_pareto_hill: degenerate tail (all values at xmin)");
    }
    ParetoFit fit;
    fit.xmin = xmin;
    fit.n_tail = tail.size();
    fit.alpha = static_cast<double>(tail.size()) / log_sum;
    fit.log_likelihood = static_cast<double>(tail.size()) * std::log(fit.alpha) -
                         (fit.alpha + 1.0) * log_sum -
                         static_cast<double>(tail.size()) * std::log(xmin);
    return fit;
}

GpdFit fit_gpd(std::span<const double> sample, double threshold) {
    std::vector<double> exceed;
    for (double x : sample) {
        if (x > threshold) exceed.push_back(x - threshold);
    }
    if (exceed.size() < 5) {
        throw InputError("fit_gpd: need at least 5 exceedances above threshold");
    }
    double mean = 0.0;
    for (double y : exceed) mean += y;
    mean /= static_cast<double>(exceed.size());
    double var = 0.0;
    for (double y : exceed) var += (y - mean) * (y - mean);
    var /= static_cast<double>(exceed.size());
    if (var <= 0.0) {
        throw NumericError("fit_gpd: exceedances all equal, likelihood unbounded");
    }

    auto nll = [&exceed](const std::vector<double>& p) {
        const double sigma = std::exp(p[0]);
        const double xi = p[1];
        double sum = 0.0;
        for (double y : exceed) {
            if (std::fabs(xi) < 1e-12) {
                sum += std::log(sigma) + y / sigma;
            } else {
                const double z = 1.0 + xi * y / sigma;
                if (z <= 1e-12) return 1e300;
                sum += std::log(sigma) + (1.0 / xi + 1.0) * std::log(z);
            }
        }
        return sum;
    };

    // Moment-based start (Hosking & Wallis).
    const double ratio = mean * mean / var;
    std::vector<double> x0 = {std::log(std::max(0.5 * mean * (ratio + 1.0), 1e-8)),
                              0.5 * (1.0 - ratio)};
    const NelderMeadResult res = nelder_mead_minimize(nll, x0);
    if (!res.converged) {
        std::ostringstream msg;
        msg << "fit_gpd: optimizer did not converge (best nll=" << res.value
            << ", sigma=" << std::exp(res.x[0]) << ", xi=" << res.x[1]
            << ", evaluations=" << res.evaluations << ")";
        throw NumericError(msg.str());
    }
    GpdFit fit;
    fit.threshold = threshold;
    fit.scale = std::exp(res.x[0]);
    fit.shape = res.x[1];
    fit.implied_alpha = (fit.shape > 0.0) ? 1.0 / fit.shape : kInf;
    fit.n_exceed = exceed.size();
    fit.log_likelihood = -res.value;
    return fit;
}

LognormalFit fit_truncated_lognormal(std::span<const double> sample,
                                     double xmin) {
    require_positive(sample, "fit_truncated_lognormal");
    const std::vector<double> tail = tail_values(sample, xmin);
    if (tail.size() < 5) {
        throw InputError("fit_truncated_lognormal: need at least 5 values >= xmin");
    }
    const LognormalFit init = fit_lognormal(tail);
    const double log_xmin = std::log(xmin);

    auto nll = [&tail, log_xmin](const std::vector<double>& p) {
        const double mu = p[0];
        const double sigma = std::exp(p[1]);
        const double sf = mathfn::norm_sf((log_xmin - mu) / sigma);
        if (sf <= 0.0) return 1e300;
        double sum = 0.0;
        for (double x : tail) {
            const double z = (std::log(x) - mu) / sigma;
            sum -= mathfn::norm_log_pdf(z) - std::log(x) - std::log(sigma) -
                   std::log(sf);
        }
        return sum;
    };

    const NelderMeadResult res =
        nelder_mead_minimize(nll, {init.mu, std::log(init.sigma)});
    if (!res.converged) {
        std::ostringstream msg;
        msg << "fit_truncated_lognormal: optimizer did not converge (best nll="
            << res.value << ", mu=" << res.x[0] << ", sigma=" << std::exp(res.x[1])
            << ", evaluations=" << res.evaluations << ")";
        throw NumericError(msg.str());
    }
    LognormalFit fit;
    fit.mu = res.x[0];
    fit.sigma = std::exp(res.x[1]);
    fit.truncation_min = xmin;
    fit.n = tail.size();
    fit.log_likelihood = -res.value;
    return fit;
}

XminResult select_xmin(std::span<const double> sample, std::size_t min_tail) {
    if (sample.size() < min_tail + 1) {
        throw InputError("select_xmin: sample smaller than min_tail + 1");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    XminResult result;
    bool have_best = false;
    for (double cand : sorted) {
        const std::vector<double> tail = tail_values(sample, cand);
        if (tail.size() < min_tail) break;
        ParetoFit fit;
        try {
            fit = fit_pareto_hill(sample, cand);
        } catch (const NumericError&) {
            continue;  // degenerate tail, not a usable candidate
        }
        const double ks = ks_distance(tail, fit);
        result.scan.push_back({cand, fit.alpha, ks, tail.size()});
        if (!have_best || ks < result.ks_distance) {
            result.xmin = cand;
            result.alpha = fit.alpha;
            result.ks_distance = ks;
            result.n_tail = tail.size();
            have_best = true;
        }
    }
    if (!have_best) {
        throw NumericError("select_xmin: no usable cutoff candidate");
    }
    return result;
}

double ks_distance(std::span<const double> tail, const ModelFit& model) {
    if (tail.empty()) throw InputError("ks_distance: empty tail");
    std::vector<double> sorted(tail.begin(), tail.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    const double trunc = std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ParetoFit>) {
                return m.xmin;
            } else if constexpr (std::is_same_v<T, LognormalFit>) {
                return m.truncation_min.value_or(-kInf);
            } else {
                return m.threshold;
            }
        },
        model);

    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        // Right-continuous empirical step: include the whole tie block.
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double ecdf = static_cast<double>(j + 1) / n;
        double cdf;
        if (trunc > -kInf) {
            cdf = cdf_conditional(model, sorted[i], trunc);
        } else {
            cdf = 1.0 - tail_probability(model, sorted[i]);
        }
        if (cdf < -1e-12 || cdf > 1.0 + 1e-12) {
            throw InputError("ks_distance: value outside model support");
        }
        d = std::max(d, std::fabs(ecdf - cdf));
        i = j;
    }
    return d;
}

double tail_probability(const ModelFit& model, double x) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ParetoFit>) {
                return model_sf(m, x);  // conditional tail law, P = 1 at xmin
            } else if constexpr (std::is_same_v<T, LognormalFit>) {
                // Reported on the plain lognormal law even for truncated fits.
                return model_sf(m, x);
            } else {
                return model_sf(m, x);
            }
        },
        model);
}

double tail_probability_spliced(const ParetoFit& fit, double x,
                                std::size_t n_total) {
    if (n_total < fit.n_tail) {
        throw InputError("tail_probability_spliced: n_total < n_tail");
    }
    const double weight =
        static_cast<double>(fit.n_tail) / static_cast<double>(n_total);
    return weight * model_sf(fit, x);
}

double log_density_conditional(const ModelFit& model, double x, double xmin) {
    return std::visit(
        [&](const auto& m) {
            return model_logpdf(m, x) - std::log(model_sf(m, xmin));
        },
        model);
}

double cdf_conditional(const ModelFit& model, double x, double xmin) {
    return std::visit(
        [&](const auto& m) {
            const double sf_min = model_sf(m, xmin);
            return 1.0 - model_sf(m, x) / sf_min;
        },
        model);
}

std::vector<std::pair<double, double>>
model_ccdf(const ModelFit& model, std::span<const double> xs) {
    std::vector<std::pair<double, double>> out;
    out.reserve(xs.size());
    for (double x : xs) out.emplace_back(x, tail_probability(model, x));
    return out;
}

} // namespace olycost
