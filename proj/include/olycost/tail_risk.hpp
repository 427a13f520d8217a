#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "olycost/distfit.hpp"

namespace olycost {

enum class MeanMethod {
    sample,
    lognormal_plug_in,
    pareto_conditional,
    pareto_spliced,
    shadow_dual,
};

std::string to_string(MeanMethod m);

struct MeanEstimate {
    MeanMethod method = MeanMethod::sample;
    double value = 0.0;
    bool infinite = false;  // set instead of a value when alpha <= 1
    std::string inputs;     // human-readable parameter description
};

enum class RandomnessRegime {
    infinite_mean,    // alpha <= 1
    levy_stable,      // 1 < alpha < 2
    finite_variance,  // 2 <= alpha < 3
    higher_moments,   // alpha >= 3
};

std::string to_string(RandomnessRegime r);

struct PowerLawPeer {
    std::string event_type;
    double alpha = 0.0;
};

struct RandomnessClass {
    double alpha = 0.0;
    RandomnessRegime regime = RandomnessRegime::higher_moments;
    std::vector<PowerLawPeer> peers;  // sorted by alpha
};

struct HeuristicReport {
    double p_threefold_empirical = 0.0;
    std::vector<std::pair<std::string, double>> p_threefold_by_model;
    std::pair<double, double> true_mean_range_pct{0.0, 0.0};
    std::vector<std::string> verdicts;
};

struct UpliftResult {
    double acceptable_risk = 0.0;
    double empirical_uplift_pct = 0.0;
    std::optional<double> model_uplift_pct;
    std::string method;
};

// Plug-in means: lognormal e^{mu + sigma^2/2}; conditional Pareto
// alpha*xmin/(alpha-1), infinite for alpha <= 1.
MeanEstimate plug_in_mean(const LognormalFit& fit);
MeanEstimate plug_in_mean(const ParetoFit& fit);

// Unconditional spliced mean: empirical body below xmin weighted by its
// share plus the conditional Pareto tail mean weighted by n_tail/n.
MeanEstimate spliced_mean(std::span<const double> sample,
                          const ParetoFit& tail_fit);

// Taleb-Cirillo dual-transform shadow mean for a sample known to live in
// [lower_bound, upper_bound]: map through the log dual, fit Hill, and
// integrate the inverse transform against the fitted Pareto density.
MeanEstimate shadow_mean_dual(std::span<const double> sample,
                              double lower_bound, double upper_bound);

// Regime classification by the alpha boundaries above, with Table 5 style
// peers attached for context.
RandomnessClass classify_randomness(double alpha,
                                    std::vector<PowerLawPeer> peers = {});

// Loads the bundled peers file (event_type,alpha).
std::vector<PowerLawPeer> load_powerlaw_peers(const std::string& path);

// Three-fold exceedance probabilities (empirical and per model) plus the
// spread of the mean estimates, expressed as percent overrun.
HeuristicReport evaluate_heuristics(std::span<const double> sample,
                                    std::span<const ModelFit> fits);

// Reference-class-forecasting uplift: the nearest-rank quantile of the
// ratio sample at probability 1 - acceptable_risk, as percent overrun.
UpliftResult rcf_uplift(std::span<const double> sample, double acceptable_risk,
                        const ModelFit* model = nullptr);

} // namespace olycost
