#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace olycost {

enum class DistKind { pareto, lognormal, gaussian };

// Simulation source distribution. Parameter meaning by kind:
//   pareto:    a = alpha, b = xmin
//   lognormal: a = mu,    b = sigma
//   gaussian:  a = mean,  b = sd
struct SimDistribution {
    DistKind kind = DistKind::gaussian;
    double a = 0.0;
    double b = 1.0;
};

std::string to_string(const SimDistribution& dist);

// Parses "pareto:1.2:1", "lognormal:0.85:0.533", "gaussian:0:1".
SimDistribution parse_distribution(const std::string& spec);

struct StepQuantiles {
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;
};

struct SimulationTrace {
    std::uint64_t seed = 0;
    std::size_t runs = 0;
    std::size_t horizon = 0;
    SimDistribution dist;
    std::vector<StepQuantiles> running_mean_quantiles;  // one per step
    double record_count_mean = 0.0;  // mean running-maximum records per run
    double max_exceed_prob = 0.0;    // P(second-half max beats first-half max)
};

// Inverse-transform quantile of the distribution at u in (0, 1).
double quantile(const SimDistribution& dist, double u);

// n inverse-transform draws; pure function of (dist, n, seed).
std::vector<double> sample(const SimDistribution& dist, std::size_t n,
                           std::uint64_t seed);

// Per-run cumulative means with cross-run quantiles at every step. Run r
// draws from the stream derive_stream_seed(seed, r), so results do not
// depend on execution order.
SimulationTrace running_mean_experiment(const SimDistribution& dist,
                                        std::size_t horizon, std::size_t runs,
                                        std::uint64_t seed);

// Fraction of runs where the max of `future` fresh draws exceeds the max of
// `history` draws.
double record_exceedance(const SimDistribution& dist, std::size_t history,
                         std::size_t future, std::size_t runs,
                         std::uint64_t seed);

// IQR of per-run sample means divided by their median.
double mean_dispersion(const SimDistribution& dist, std::size_t sample_size,
                       std::size_t runs, std::uint64_t seed);

// Trace serialization: CSV is "step,q05,q50,q95"; JSON carries the summary.
void write_trace_csv(const SimulationTrace& trace, const std::string& path);
std::string trace_summary_json(const SimulationTrace& trace);

} // namespace olycost
