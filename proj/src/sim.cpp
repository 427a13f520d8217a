#include "olycost/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "olycost/errors.hpp"
#include "olycost/mathfn.hpp"
#include "olycost/rng.hpp"

namespace olycost {

namespace {

void check_parameters(const SimDistribution& dist) {
    switch (dist.kind) {
        case DistKind::pareto:
            if (!(dist.a > 0.0) || !(dist.b > 0.0)) {
                throw InputError("pareto requires alpha > 0 and xmin > 0");
            }
            break;
        case DistKind::lognormal:
            if (!(dist.b > 0.0)) throw InputError("lognormal requires sigma > 0");
            break;
        case DistKind::gaussian:
            if (!(dist.b > 0.0)) throw InputError("gaussian requires sd > 0");
            break;
    }
}

// Nearest-rank quantile of a sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double q) {
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

std::string to_string(const SimDistribution& dist) {
    std::ostringstream os;
    switch (dist.kind) {
        case DistKind::pareto: os << "pareto"; break;
        case DistKind::lognormal: os << "lognormal"; break;
        case DistKind::gaussian: os << "gaussian"; break;
    }
    os << ":" << format_double(dist.a) << ":" << format_double(dist.b);
    return os.str();
}

SimDistribution parse_distribution(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) {
        throw InputError("distribution spec must be kind:a:b, got '" + spec + "'");
    }
    SimDistribution dist;
    if (parts[0] == "pareto") {
        dist.kind = DistKind::pareto;
    } else if (parts[0] == "lognormal") {
        dist.kind = DistKind::lognormal;
    } else if (parts[0] == "gaussian") {
        dist.kind = DistKind::gaussian;
    } else {
        throw InputError("unknown distribution kind '" + parts[0] + "'");
    }
    try {
        dist.a = std::stod(parts[1]);
        dist.b = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw InputError("malformed distribution parameters in '" + spec + "'");
    }
    check_parameters(dist);
    return dist;
}

double quantile(const SimDistribution& dist, double u) {
    check_parameters(dist);
    if (!(u > 0.0 && u <= 1.0)) {
        throw InputError("quantile: u must be in (0, 1]");
    }
    switch (dist.kind) {
        case DistKind::pareto:
            return dist.b * std::pow(u, -1.0 / dist.a);
        case DistKind::lognormal:
            if (u == 1.0) u = std::nextafter(1.0, 0.0);
            return std::exp(dist.a + dist.b * mathfn::norm_quantile(u));
        case DistKind::gaussian:
            if (u == 1.0) u = std::nextafter(1.0, 0.0);
            return dist.a + dist.b * mathfn::norm_quantile(u);
    }
    return 0.0;
}

std::vector<double> sample(const SimDistribution& dist, std::size_t n,
                           std::uint64_t seed) {
    if (n < 1) throw InputError("sample: n must be >= 1");
    check_parameters(dist);
    SplitMix64 rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = quantile(dist, rng.next_uniform01());
    }
    return out;
}

SimulationTrace running_mean_experiment(const SimDistribution& dist,
                                        std::size_t horizon, std::size_t runs,
                                        std::uint64_t seed) {
    if (horizon < 10 || runs < 1) {
        throw InputError("running_mean_experiment: need horizon >= 10 and runs >= 1");
    }
    check_parameters(dist);

    SimulationTrace trace;
    trace.seed = seed;
    trace.runs = runs;
    trace.horizon = horizon;
    trace.dist = dist;

    // means[step][run]; populated run by run from independent streams, so
    // any execution order yields identical results.
    std::vector<std::vector<double>> means(horizon,
                                           std::vector<double>(runs, 0.0));
    double record_total = 0.0;
    std::size_t exceed_runs = 0;
    const std::size_t half = horizon / 2;

    for (std::size_t r = 0; r < runs; ++r) {
        SplitMix64 rng(derive_stream_seed(seed, r));
        double cum = 0.0;
        double running_max = -std::numeric_limits<double>::infinity();
        double first_half_max = -std::numeric_limits<double>::infinity();
        double second_half_max = -std::numeric_limits<double>::infinity();
        std::size_t records = 0;
        for (std::size_t step = 0; step < horizon; ++step) {
            const double x = quantile(dist, rng.next_uniform01());
            cum += x;
            means[step][r] = cum / static_cast<double>(step + 1);
            if (step > 0 && x > running_max) ++records;
            running_max = std::max(running_max, x);
            if (step < half) {
                first_half_max = std::max(first_half_max, x);
            } else {
                second_half_max = std::max(second_half_max, x);
            }
        }
        record_total += static_cast<double>(records);
        if (second_half_max > first_half_max) ++exceed_runs;
    }

    trace.running_mean_quantiles.resize(horizon);
    for (std::size_t step = 0; step < horizon; ++step) {
        std::vector<double>& row = means[step];
        std::sort(row.begin(), row.end());
        trace.running_mean_quantiles[step] = {sorted_quantile(row, 0.05),
                                              sorted_quantile(row, 0.50),
                                              sorted_quantile(row, 0.95)};
    }
    trace.record_count_mean = record_total / static_cast<double>(runs);
    trace.max_exceed_prob =
        static_cast<double>(exceed_runs) / static_cast<double>(runs);
    return trace;
}

double record_exceedance(const SimDistribution& dist, std::size_t history,
                         std::size_t future, std::size_t runs,
                         std::uint64_t seed) {
    if (history < 1 || future < 1 || runs < 1) {
        throw InputError("record_exceedance: history, future and runs must be >= 1");
    }
    check_parameters(dist);
    std::size_t exceed = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        SplitMix64 rng(derive_stream_seed(seed, r));
        double hist_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < history; ++i) {
            hist_max = std::max(hist_max, quantile(dist, rng.next_uniform01()));
        }
        bool beaten = false;
        for (std::size_t i = 0; i < future; ++i) {
            if (quantile(dist, rng.next_uniform01()) > hist_max) beaten = true;
        }
        if (beaten) ++exceed;
    }
    return static_cast<double>(exceed) / static_cast<double>(runs);
}

double mean_dispersion(const SimDistribution& dist, std::size_t sample_size,
                       std::size_t runs, std::uint64_t seed) {
    if (sample_size < 2 || runs < 30) {
        throw InputError("mean_dispersion: need sample_size >= 2 and runs >= 30");
    }
    check_parameters(dist);
    std::vector<double> means(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        SplitMix64 rng(derive_stream_seed(seed, r));
        double sum = 0.0;
        for (std::size_t i = 0; i < sample_size; ++i) {
            sum += quantile(dist, rng.next_uniform01());
        }
        means[r] = sum / static_cast<double>(sample_size);
    }
    std::sort(means.begin(), means.end());
    const double iqr =
        sorted_quantile(means, 0.75) - sorted_quantile(means, 0.25);
    const double median = sorted_quantile(means, 0.50);
    return iqr / median;
}

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "step,q05,q50,q95\n";
    for (std::size_t step = 0; step < trace.running_mean_quantiles.size();
         ++step) {
        const StepQuantiles& q = trace.running_mean_quantiles[step];
        out << (step + 1) << ',' << format_double(q.q05) << ','
            << format_double(q.q50) << ',' << format_double(q.q95) << "\n";
    }
}

std::string trace_summary_json(const SimulationTrace& trace) {
    nlohmann::json j;
    j["distribution"] = to_string(trace.dist);
    j["seed"] = trace.seed;
    j["runs"] = trace.runs;
    j["horizon"] = trace.horizon;
    j["record_count_mean"] = trace.record_count_mean;
    j["max_exceed_prob"] = trace.max_exceed_prob;
    const bool infinite_mean =
        trace.dist.kind == DistKind::pareto && trace.dist.a <= 1.0;
    j["regime"] = infinite_mean ? "infinite-mean" : "finite-mean";
    if (!trace.running_mean_quantiles.empty()) {
        const StepQuantiles& last = trace.running_mean_quantiles.back();
        j["final_q05"] = last.q05;
        j["final_q50"] = last.q50;
        j["final_q95"] = last.q95;
    }
    return j.dump(2) + "\n";
}

} // namespace olycost
