#include "olycost/tail_risk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "olycost/errors.hpp"
#include "olycost/mathfn.hpp"

namespace olycost {

namespace {

std::string describe(const LognormalFit& f) {
    std::ostringstream os;
    os << "lognormal(mu=" << f.mu << ", sigma=" << f.sigma;
    if (f.truncation_min) os << ", truncated at " << *f.truncation_min;
    os << ")";
    return os.str();
}

std::string describe(const ParetoFit& f) {
    std::ostringstream os;
    os << "pareto(xmin=" << f.xmin << ", alpha=" << f.alpha << ")";
    return os.str();
}

std::string describe(const GpdFit& f) {
    std::ostringstream os;
    os << "gpd(threshold=" << f.threshold << ", scale=" << f.scale
       << ", shape=" << f.shape << ")";
    return os.str();
}

std::string describe_model(const ModelFit& model) {
    return std::visit([](const auto& m) { return describe(m); }, model);
}

} // namespace

std::string to_string(MeanMethod m) {
    switch (m) {
        case MeanMethod::sample: return "sample";
        case MeanMethod::lognormal_plug_in: return "lognormal_plug_in";
        case MeanMethod::pareto_conditional: return "pareto_conditional";
        case MeanMethod::pareto_spliced: return "pareto_spliced";
        case MeanMethod::shadow_dual: return "shadow_dual";
    }
    return "sample";
}

std::string to_string(RandomnessRegime r) {
    switch (r) {
        case RandomnessRegime::infinite_mean: return "infinite_mean";
        case RandomnessRegime::levy_stable: return "levy_stable";
        case RandomnessRegime::finite_variance: return "finite_variance";
        case RandomnessRegime::higher_moments: return "higher_moments";
    }
    return "higher_moments";
}

MeanEstimate plug_in_mean(const LognormalFit& fit) {
    MeanEstimate est;
    est.method = MeanMethod::lognormal_plug_in;
    est.value = std::exp(fit.mu + fit.sigma * fit.sigma / 2.0);
    est.inputs = describe(fit);
    return est;
}

MeanEstimate plug_in_mean(const ParetoFit& fit) {
    MeanEstimate est;
    est.method = MeanMethod::pareto_conditional;
    est.inputs = describe(fit);
    if (fit.alpha <= 1.0) {
        est.infinite = true;
    } else {
        est.value = fit.alpha * fit.xmin / (fit.alpha - 1.0);
    }
    return est;
}

MeanEstimate spliced_mean(std::span<const double> sample,
                          const ParetoFit& tail_fit) {
    if (sample.empty()) throw InputError("spliced_mean: empty sample");
    const double max = *std::max_element(sample.begin(), sample.end());
    if (tail_fit.xmin > max) {
        throw InputError("spliced_mean: xmin above sample maximum");
    }
    MeanEstimate est;
    est.method = MeanMethod::pareto_spliced;
    est.inputs = describe(tail_fit);
    if (tail_fit.alpha <= 1.0) {
        est.infinite = true;
        return est;
    }
    double body_sum = 0.0;
    std::size_t body_n = 0;
    for (double x : sample) {
        if (x < tail_fit.xmin) {
            body_sum += x;
            ++body_n;
        }
    }
    const double n = static_cast<double>(sample.size());
    const double tail_weight = static_cast<double>(sample.size() - body_n) / n;
    const double tail_mean =
        tail_fit.alpha * tail_fit.xmin / (tail_fit.alpha - 1.0);
    const double body_mean =
        (body_n > 0) ? body_sum / static_cast<double>(body_n) : 0.0;
    est.value = body_mean * (static_cast<double>(body_n) / n) +
                tail_mean * tail_weight;
    return est;
}

MeanEstimate shadow_mean_dual(std::span<const double> sample,
                              double lower_bound, double upper_bound) {
    if (sample.empty()) throw InputError("shadow_mean_dual: empty sample");
    const auto [min_it, max_it] =
        std::minmax_element(sample.begin(), sample.end());
    if (!(lower_bound < *min_it)) {
        throw InputError("shadow_mean_dual: lower bound must be below the sample minimum");
    }
    if (!(upper_bound > *max_it)) {
        throw InputError("shadow_mean_dual: upper bound must exceed the sample maximum");
    }

    const double L = lower_bound;
    const double H = upper_bound;
    // Log dual transform: values in (L, H) map to an unbounded tail.
    std::vector<double> z(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        z[i] = L - H * std::log((H - sample[i]) / (H - L));
    }
    const ParetoFit dual_fit = fit_pareto_hill(z, L);

    // E[phi^-1(Z)] with Z ~ Pareto(alpha, L), via the inverse-transform
    // substitution Z = L * u^(-1/alpha), u uniform on (0, 1).
    const double alpha = dual_fit.alpha;
    auto integrand = [L, H, alpha](double u) {
        if (u <= 0.0) return H;  // z -> infinity limit
        const double zv = L * std::pow(u, -1.0 / alpha);
        return H - (H - L) * std::exp(-(zv - L) / H);
    };
    const double mean = mathfn::integrate(integrand, 0.0, 1.0, 1e-8);

    MeanEstimate est;
    est.method = MeanMethod::shadow_dual;
    est.value = mean;
    std::ostringstream os;
    os << "dual transform with L=" << L << ", H=" << H
       << ", hill alpha=" << alpha;
    est.inputs = os.str();
    return est;
}

RandomnessClass classify_randomness(double alpha,
                                    std::vector<PowerLawPeer> peers) {
    if (!(alpha > 0.0)) throw InputError("classify_randomness: alpha must be > 0");
    RandomnessClass cls;
    cls.alpha = alpha;
    if (alpha <= 1.0) {
        cls.regime = RandomnessRegime::infinite_mean;
    } else if (alpha < 2.0) {
        cls.regime = RandomnessRegime::levy_stable;
    } else if (alpha < 3.0) {
        cls.regime = RandomnessRegime::finite_variance;
    } else {
        cls.regime = RandomnessRegime::higher_moments;
    }
    std::sort(peers.begin(), peers.end(),
              [](const PowerLawPeer& a, const PowerLawPeer& b) {
                  if (a.alpha != b.alpha) return a.alpha < b.alpha;
                  return a.event_type < b.event_type;
              });
    cls.peers = std::move(peers);
    return cls;
}

std::vector<PowerLawPeer> load_powerlaw_peers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "event_type,alpha") {
        throw InputError("'" + path + "': header must be 'event_type,alpha'");
    }
    std::vector<PowerLawPeer> peers;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw InputError("'" + path + "': malformed row '" + line + "'");
        }
        PowerLawPeer peer;
        peer.event_type = line.substr(0, comma);
        try {
            peer.alpha = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw InputError("'" + path + "': malformed alpha in '" + line + "'");
        }
        peers.push_back(std::move(peer));
    }
    return peers;
}

HeuristicReport evaluate_heuristics(std::span<const double> sample,
                                    std::span<const ModelFit> fits) {
    if (sample.empty() || fits.empty()) {
        throw InputError("evaluate_heuristics: need a sample and at least one fit");
    }
    HeuristicReport report;
    std::size_t threefold = 0;
    double sum = 0.0;
    for (double x : sample) {
        if (x >= 3.0) ++threefold;
        sum += x;
    }
    const double n = static_cast<double>(sample.size());
    report.p_threefold_empirical = static_cast<double>(threefold) / n;

    std::vector<double> means;
    means.push_back(sum / n);
    for (const ModelFit& fit : fits) {
        report.p_threefold_by_model.emplace_back(describe_model(fit),
                                                 tail_probability(fit, 3.0));
        if (const auto* ln = std::get_if<LognormalFit>(&fit)) {
            // A truncated fit only models the tail; its untruncated plug-in
            // formula says nothing about the overall mean.
            if (!ln->truncation_min) means.push_back(plug_in_mean(*ln).value);
        } else if (const auto* pareto = std::get_if<ParetoFit>(&fit)) {
            const MeanEstimate est = plug_in_mean(*pareto);
            if (!est.infinite) means.push_back(est.value);
        }
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    report.true_mean_range_pct = {(*lo - 1.0) * 100.0, (*hi - 1.0) * 100.0};

    {
        std::ostringstream os;
        os << "Heuristic 1: risk of a three-fold or larger cost increase is "
           << report.p_threefold_empirical * 100.0
           << " percent empirically; hosting requires accepting roughly a 20 "
              "percent risk of tripling.";
        report.verdicts.push_back(os.str());
    }
    {
        std::ostringstream os;
        os << "Heuristic 2: estimated true mean cost overrun spans "
           << report.true_mean_range_pct.first << " to "
           << report.true_mean_range_pct.second
           << " percent across the fitted models, with substantial risk of "
              "exceeding this range.";
        report.verdicts.push_back(os.str());
    }
    return report;
}

UpliftResult rcf_uplift(std::span<const double> sample, double acceptable_risk,
                        const ModelFit* model) {
    if (sample.size() < 2) throw InputError("rcf_uplift: need n >= 2");
    if (!(acceptable_risk > 0.0 && acceptable_risk < 1.0)) {
        throw InputError("rcf_uplift: acceptable_risk must be in (0, 1)");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    // Nearest-rank quantile at probability 1 - risk.
    auto rank = static_cast<std::size_t>(
        std::ceil((1.0 - acceptable_risk) * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());

    UpliftResult res;
    res.acceptable_risk = acceptable_risk;
    res.empirical_uplift_pct = (sorted[rank - 1] - 1.0) * 100.0;
    res.method = "nearest_rank";
    if (model != nullptr) {
        const double q = std::visit(
            [&](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, LognormalFit>) {
                    return std::exp(m.mu + m.sigma * mathfn::norm_quantile(
                                                         1.0 - acceptable_risk));
                } else if constexpr (std::is_same_v<T, ParetoFit>) {
                    return m.xmin * std::pow(acceptable_risk, -1.0 / m.alpha);
                } else {
                    if (std::fabs(m.shape) < 1e-12) {
                        return m.threshold - m.scale * std::log(acceptable_risk);
                    }
                    return m.threshold +
                           m.scale / m.shape *
                               (std::pow(acceptable_risk, -m.shape) - 1.0);
                }
            },
            *model);
        res.model_uplift_pct = (q - 1.0) * 100.0;
    }
    return res;
}

} // namespace olycost
