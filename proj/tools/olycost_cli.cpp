#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "olycost/dataset.hpp"
#include "olycost/distfit.hpp"
#include "olycost/errors.hpp"
#include "olycost/report.hpp"
#include "olycost/sim.hpp"
#include "olycost/stats.hpp"
#include "olycost/tail_risk.hpp"
#include "olycost/vuong.hpp"

namespace {

using nlohmann::json;
using namespace olycost;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

// Human-readable numbers use 6 significant digits; JSON keeps full
// shortest-roundtrip precision via the serializer.
std::string fmt6(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

GamesTable load_checked(const std::string& path) {
    GamesTable table = load_games_csv(path);
    const ValidationReport report = validate(table);
    for (const ValidationIssue& w : report.warnings) {
        std::cerr << "warning: row " << w.row << ": " << w.message << "\n";
    }
    if (!report.accepted()) {
        std::ostringstream os;
        os << "validation failed:";
        for (const ValidationIssue& e : report.errors) {
            os << "\n  row " << e.row << ": " << e.message;
        }
        throw InputError(os.str());
    }
    return table;
}

CohortFilter parse_filter(const std::string& name) {
    if (name == "all") return CohortFilter::all;
    if (name == "summer") return CohortFilter::summer;
    if (name == "winter") return CohortFilter::winter;
    throw InputError("unknown filter '" + name + "'");
}

json summary_to_json(const SummaryStats& s) {
    json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["sd"] = s.sd;
    j["min"] = s.min;
    j["max"] = s.max;
    for (const auto& [threshold, prop] : s.prop_above) {
        json p;
        p["threshold"] = threshold;
        p["proportion"] = prop;
        j["prop_above"].push_back(p);
    }
    return j;
}

std::vector<double> cohort_costs(const GamesTable& table, CohortFilter filter) {
    std::vector<double> costs;
    for (const GamesRecord& r : table.records) {
        if (!r.outturn_cost) continue;
        if (filter == CohortFilter::summer && r.season != Season::summer) continue;
        if (filter == CohortFilter::winter && r.season != Season::winter) continue;
        costs.push_back(*r.outturn_cost);
    }
    return costs;
}

int cmd_describe(const std::string& input, const std::string& filter_name,
                 const std::string& format) {
    const GamesTable table = load_checked(input);
    const CohortFilter filter = parse_filter(filter_name);
    const OverrunSample sample = overrun_ratios(table, filter);
    const std::vector<double> thresholds = {1.5, 2.0, 3.0};
    const SummaryStats ratio_stats = summary(sample.ratios, thresholds);
    const std::vector<double> costs = cohort_costs(table, filter);
    const UnitCostResult unit = derive_unit_costs(table);

    if (format == "json") {
        json j;
        j["cohort"] = to_string(filter);
        j["ratios"] = summary_to_json(ratio_stats);
        j["overrun_pct"] = {{"mean", (ratio_stats.mean - 1.0) * 100.0},
                            {"median", (ratio_stats.median - 1.0) * 100.0}};
        if (!costs.empty()) j["costs"] = summary_to_json(summary(costs));
        for (const UnitCostRow& row : unit.rows) {
            json one;
            one["name"] = row.name;
            one["cost_per_event"] = row.cost_per_event;
            one["cost_per_athlete"] = row.cost_per_athlete;
            j["unit_costs"].push_back(one);
        }
        j["unit_costs_skipped"] = unit.skipped;
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << "section,metric,value\n";
        auto emit = [](const std::string& section, const std::string& metric,
                       double value) {
            std::cout << section << ',' << metric << ',' << fmt6(value) << "\n";
        };
        emit("ratios", "n", static_cast<double>(ratio_stats.n));
        emit("ratios", "mean", ratio_stats.mean);
        emit("ratios", "median", ratio_stats.median);
        emit("ratios", "sd", ratio_stats.sd);
        emit("overrun_pct", "mean", (ratio_stats.mean - 1.0) * 100.0);
        emit("overrun_pct", "median", (ratio_stats.median - 1.0) * 100.0);
        for (const auto& [threshold, prop] : ratio_stats.prop_above) {
            emit("ratios", "prop_above_" + fmt6(threshold), prop);
        }
        if (!costs.empty()) {
            const SummaryStats cost_stats = summary(costs);
            emit("costs", "n", static_cast<double>(cost_stats.n));
            emit("costs", "mean", cost_stats.mean);
            emit("costs", "median", cost_stats.median);
        }
        for (const UnitCostRow& row : unit.rows) {
            emit("unit_cost_per_event", row.name, row.cost_per_event);
            emit("unit_cost_per_athlete", row.name, row.cost_per_athlete);
        }
    } else {
        throw InputError("unknown format '" + format + "'");
    }
    return kExitOk;
}

int cmd_fit(const std::string& input, const std::string& model,
            const std::string& xmin_spec) {
    const GamesTable table = load_checked(input);
    const OverrunSample sample = overrun_ratios(table, CohortFilter::all);
    const double sample_min =
        *std::min_element(sample.ratios.begin(), sample.ratios.end());

    json scan_json;
    auto resolve_xmin = [&](const std::string& spec) {
        if (spec == "min") return sample_min;
        if (spec == "auto") {
            const XminResult scan = select_xmin(sample.ratios);
            scan_json["xmin"] = scan.xmin;
            scan_json["alpha"] = scan.alpha;
            scan_json["ks_distance"] = scan.ks_distance;
            scan_json["n_tail"] = scan.n_tail;
            for (const XminCandidate& c : scan.scan) {
                json one;
                one["xmin"] = c.xmin;
                one["alpha"] = c.alpha;
                one["ks"] = c.ks;
                one["n_tail"] = c.n_tail;
                scan_json["scan"].push_back(one);
            }
            return scan.xmin;
        }
        try {
            std::size_t pos = 0;
            const double v = std::stod(spec, &pos);
            if (pos != spec.size()) throw std::invalid_argument(spec);
            return v;
        } catch (const std::exception&) {
            throw InputError("--xmin must be 'auto', 'min' or a number, got '" +
                             spec + "'");
        }
    };

    std::vector<double> tail;
    auto tail_at = [&](double xmin) {
        tail.clear();
        for (double x : sample.ratios) {
            if (x >= xmin) tail.push_back(x);
        }
        std::sort(tail.begin(), tail.end());
        return std::span<const double>(tail);
    };

    json j;
    j["model"] = model;
    if (model == "lognormal") {
        const LognormalFit fit = fit_lognormal(sample.ratios);
        j["mu"] = fit.mu;
        j["sigma"] = fit.sigma;
        j["n"] = fit.n;
        j["log_likelihood"] = fit.log_likelihood;
        j["kurtosis"] = lognormal_kurtosis(fit);
        j["ks_distance"] = ks_distance(tail_at(0.0), ModelFit(fit));
        std::cerr << "lognormal: mu " << fmt6(fit.mu) << ", sigma "
                  << fmt6(fit.sigma) << "\n";
    } else if (model == "pareto1") {
        const double xmin = resolve_xmin(xmin_spec.empty() ? "min" : xmin_spec);
        const ParetoFit fit = fit_pareto_hill(sample.ratios, xmin);
        j["xmin"] = fit.xmin;
        j["alpha"] = fit.alpha;
        j["n_tail"] = fit.n_tail;
        j["log_likelihood"] = fit.log_likelihood;
        j["ks_distance"] = ks_distance(tail_at(xmin), ModelFit(fit));
        if (!scan_json.is_null()) j["xmin_scan"] = scan_json;
        std::cerr << "pareto1: xmin " << fmt6(fit.xmin) << ", alpha "
                  << fmt6(fit.alpha) << "\n";
    } else if (model == "gpd") {
        const double threshold =
            xmin_spec.empty() ? 1.0 : resolve_xmin(xmin_spec);
        const GpdFit fit = fit_gpd(sample.ratios, threshold);
        j["threshold"] = fit.threshold;
        j["scale"] = fit.scale;
        j["shape"] = fit.shape;
        j["implied_alpha"] = std::isfinite(fit.implied_alpha)
                                 ? json(fit.implied_alpha)
                                 : json("infinite");
        j["n_exceed"] = fit.n_exceed;
        j["log_likelihood"] = fit.log_likelihood;
        std::cerr << "gpd: scale " << fmt6(fit.scale) << ", shape "
                  << fmt6(fit.shape) << "\n";
    } else if (model == "trunc-lognormal") {
        const double xmin = resolve_xmin(xmin_spec.empty() ? "auto" : xmin_spec);
        const LognormalFit fit = fit_truncated_lognormal(sample.ratios, xmin);
        j["mu"] = fit.mu;
        j["sigma"] = fit.sigma;
        j["truncation_min"] = *fit.truncation_min;
        j["n"] = fit.n;
        j["log_likelihood"] = fit.log_likelihood;
        j["ks_distance"] = ks_distance(tail_at(xmin), ModelFit(fit));
        if (!scan_json.is_null()) j["xmin_scan"] = scan_json;
        std::cerr << "trunc-lognormal: mu " << fmt6(fit.mu) << ", sigma "
                  << fmt6(fit.sigma) << "\n";
    } else {
        throw InputError("unknown model '" + model + "'");
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_compare(const std::string& input, double xmin, double mu_override,
                double sigma_override, double alpha_override) {
    const GamesTable table = load_checked(input);
    const OverrunSample sample = overrun_ratios(table, CohortFilter::all);
    std::vector<double> tail;
    for (double x : sample.ratios) {
        if (x >= xmin) tail.push_back(x);
    }
    if (tail.size() < 5) {
        throw NumericError("compare: only " + std::to_string(tail.size()) +
                           " tail points at xmin " + fmt6(xmin) +
                           "; need at least 5");
    }

    const bool use_overrides = !std::isnan(mu_override) ||
                               !std::isnan(sigma_override) ||
                               !std::isnan(alpha_override);
    LognormalFit lognormal;
    ParetoFit pareto;
    if (use_overrides) {
        if (std::isnan(mu_override) || std::isnan(sigma_override) ||
            std::isnan(alpha_override)) {
            throw InputError(
                "--mu, --sigma and --alpha must be given together");
        }
        lognormal.mu = mu_override;
        lognormal.sigma = sigma_override;
        lognormal.truncation_min = xmin;
        lognormal.n = tail.size();
        pareto.xmin = xmin;
        pareto.alpha = alpha_override;
        pareto.n_tail = tail.size();
    } else {
        lognormal = fit_truncated_lognormal(sample.ratios, xmin);
        pareto = fit_pareto_hill(sample.ratios, xmin);
    }

    const VuongResult v =
        vuong_test(tail, ModelFit(lognormal), ModelFit(pareto), xmin);
    json j;
    j["order"] = "lognormal_vs_pareto";
    j["parameters"] = use_overrides ? "given" : "fitted";
    j["lognormal"] = {{"mu", lognormal.mu}, {"sigma", lognormal.sigma}};
    j["pareto"] = {{"xmin", pareto.xmin}, {"alpha", pareto.alpha}};
    j["r_normalized"] = v.r_normalized;
    j["p_two_sided"] = v.p_two_sided;
    j["n_tail"] = v.n_tail;
    j["per_point_llr_sd"] = v.per_point_llr_sd;
    std::cout << j.dump(2) << "\n";
    std::cerr << "vuong: r " << fmt6(v.r_normalized) << ", p "
              << fmt6(v.p_two_sided) << " (positive r favors lognormal)\n";
    return kExitOk;
}

int cmd_risk(const std::string& input, double risk, double bound_h,
             const std::string& peers_path) {
    const GamesTable table = load_checked(input);
    const OverrunSample sample = overrun_ratios(table, CohortFilter::all);
    const LognormalFit lognormal = fit_lognormal(sample.ratios);
    const XminResult scan = select_xmin(sample.ratios);
    const ParetoFit pareto = fit_pareto_hill(sample.ratios, scan.xmin);
    const LognormalFit trunc =
        fit_truncated_lognormal(sample.ratios, scan.xmin);

    json j;
    auto mean_to_json = [](const MeanEstimate& est) {
        json one;
        one["method"] = to_string(est.method);
        if (est.infinite) {
            one["value"] = "infinite";
        } else {
            one["value"] = est.value;
        }
        one["inputs"] = est.inputs;
        return one;
    };
    const SummaryStats stats = summary(sample.ratios);
    json sample_mean;
    sample_mean["method"] = "sample";
    sample_mean["value"] = stats.mean;
    sample_mean["inputs"] = "raw ratios";
    j["means"].push_back(sample_mean);
    j["means"].push_back(mean_to_json(plug_in_mean(lognormal)));
    j["means"].push_back(mean_to_json(plug_in_mean(pareto)));
    j["means"].push_back(mean_to_json(spliced_mean(sample.ratios, pareto)));
    const double sample_min =
        *std::min_element(sample.ratios.begin(), sample.ratios.end());
    if (sample_min > 1.0) {
        j["means"].push_back(
            mean_to_json(shadow_mean_dual(sample.ratios, 1.0, bound_h)));
    }

    std::vector<ModelFit> models;
    models.emplace_back(lognormal);
    models.emplace_back(pareto);
    models.emplace_back(trunc);
    const HeuristicReport h = evaluate_heuristics(sample.ratios, models);
    j["heuristics"]["p_threefold_empirical"] = h.p_threefold_empirical;
    for (const auto& [model, prob] : h.p_threefold_by_model) {
        json one;
        one["model"] = model;
        one["probability"] = prob;
        j["heuristics"]["p_threefold_by_model"].push_back(one);
    }
    j["heuristics"]["true_mean_range_pct"] = {h.true_mean_range_pct.first,
                                              h.true_mean_range_pct.second};
    j["heuristics"]["verdicts"] = h.verdicts;

    const UpliftResult uplift = rcf_uplift(sample.ratios, risk);
    j["uplift"]["acceptable_risk"] = uplift.acceptable_risk;
    j["uplift"]["empirical_uplift_pct"] = uplift.empirical_uplift_pct;
    j["uplift"]["method"] = uplift.method;

    if (!peers_path.empty()) {
        const RandomnessClass cls =
            classify_randomness(pareto.alpha, load_powerlaw_peers(peers_path));
        j["randomness"]["alpha"] = cls.alpha;
        j["randomness"]["regime"] = to_string(cls.regime);
        for (const PowerLawPeer& p : cls.peers) {
            json one;
            one["event_type"] = p.event_type;
            one["alpha"] = p.alpha;
            j["randomness"]["peers"].push_back(one);
        }
    }

    std::cout << j.dump(2) << "\n";
    std::cerr << "uplift at risk " << fmt6(risk) << ": "
              << fmt6(uplift.empirical_uplift_pct) << " percent\n";
    return kExitOk;
}

int cmd_simulate(const std::string& dist_spec, std::size_t horizon,
                 std::size_t runs, std::uint64_t seed,
                 const std::string& out_path) {
    const SimDistribution dist = parse_distribution(dist_spec);
    const SimulationTrace trace =
        running_mean_experiment(dist, horizon, runs, seed);
    if (!out_path.empty()) {
        write_trace_csv(trace, out_path);
        std::ofstream json_out(out_path + ".json");
        if (!json_out) throw InputError("cannot write '" + out_path + ".json'");
        json_out << trace_summary_json(trace);
    }
    std::cout << trace_summary_json(trace);
    return kExitOk;
}

int cmd_plotdata(const std::string& input, const std::string& figure,
                 const std::string& out_path) {
    const GamesTable table = load_checked(input);
    const std::string csv = plotdata_csv(table, figure);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write '" + out_path + "'");
        out << csv;
    }
    return kExitOk;
}

int cmd_report(const std::string& input, const std::string& peers_path,
               std::uint64_t seed, const std::string& out_dir) {
    const GamesTable table = load_checked(input);
    if (out_dir.empty()) {
        const json report = build_report(table, peers_path, seed);
        std::cout << report.dump(2) << "\n";
        return kExitOk;
    }
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    try {
        auto write_file = [&](const std::string& name,
                              const std::string& content) {
            const fs::path path = fs::path(out_dir) / name;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw InputError("cannot write '" + path.string() + "'");
            out << content;
            written.push_back(path);
        };
        const json report = build_report(table, peers_path, seed);
        write_file("report.json", report.dump(2) + "\n");
        write_file("ccdf.csv", plotdata_csv(table, "ccdf"));
        write_file("cost_time.csv", plotdata_csv(table, "cost-time"));
        write_file("athlete_time.csv", plotdata_csv(table, "athlete-time"));
    } catch (...) {
        // No partial bundles: remove whatever was written before the failure.
        for (const fs::path& path : written) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }
    std::cerr << "report bundle written to " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fat-tailed cost-risk analysis for Olympic Games datasets"};
    app.require_subcommand(1);

    std::string input = "data/olympics.csv";
    std::string peers = "";
    std::string filter = "all";
    std::string format = "json";
    std::string model = "lognormal";
    std::string xmin_spec;
    double xmin = 1.0;
    double mu_override = std::numeric_limits<double>::quiet_NaN();
    double sigma_override = std::numeric_limits<double>::quiet_NaN();
    double alpha_override = std::numeric_limits<double>::quiet_NaN();
    double risk = 0.5;
    double bound_h = 10.0;
    std::string dist_spec = "pareto:1.2:1";
    std::size_t horizon = 100;
    std::size_t runs = 200;
    std::uint64_t seed = 1;
    std::string out_path;

    CLI::App* describe = app.add_subcommand(
        "describe", "Cohort summaries and per-event/per-athlete costs");
    describe->add_option("input", input, "games CSV");
    describe->add_option("--filter", filter, "all|summer|winter");
    describe->add_option("--format", format, "json|csv");

    CLI::App* fit = app.add_subcommand("fit", "Fit one tail model");
    fit->add_option("input", input, "games CSV");
    fit->add_option("--model", model,
                    "lognormal|pareto1|gpd|trunc-lognormal");
    fit->add_option("--xmin", xmin_spec, "auto|min|<value>");

    CLI::App* compare = app.add_subcommand(
        "compare", "Vuong comparison of truncated lognormal vs Pareto");
    compare->add_option("input", input, "games CSV");
    compare->add_option("--xmin", xmin, "tail cutoff")->required();
    compare->add_option("--mu", mu_override, "use this lognormal mu");
    compare->add_option("--sigma", sigma_override, "use this lognormal sigma");
    compare->add_option("--alpha", alpha_override, "use this Pareto alpha");

    CLI::App* risk_cmd = app.add_subcommand(
        "risk", "Mean estimates, heuristics and forecasting uplift");
    risk_cmd->add_option("input", input, "games CSV");
    risk_cmd->add_option("--risk", risk, "acceptable risk in (0,1)");
    risk_cmd->add_option("--bound-H", bound_h, "shadow-mean upper bound");
    risk_cmd->add_option("--peers", peers, "power-law peers CSV");

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Seeded running-mean experiment");
    simulate->add_option("--dist", dist_spec,
                         "pareto:a:xmin | lognormal:mu:sigma | gaussian:m:s");
    simulate->add_option("--horizon", horizon, "draws per run");
    simulate->add_option("--runs", runs, "independent runs");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_option("--out", out_path, "trace CSV path");

    CLI::App* plotdata = app.add_subcommand("plotdata", "Plot-ready CSV");
    plotdata->add_option("input", input, "games CSV");
    plotdata->add_option("--figure", format, "ccdf|cost-time|athlete-time")
        ->required();
    plotdata->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* report = app.add_subcommand(
        "report", "Full analysis bundle as JSON plus plot CSVs");
    report->add_option("input", input, "games CSV");
    report->add_option("--peers", peers, "power-law peers CSV");
    report->add_option("--seed", seed, "simulation seed");
    report->add_option("--out", out_path, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (describe->parsed()) return cmd_describe(input, filter, format);
        if (fit->parsed()) return cmd_fit(input, model, xmin_spec);
        if (compare->parsed()) {
            return cmd_compare(input, xmin, mu_override, sigma_override,
                               alpha_override);
        }
        if (risk_cmd->parsed()) {
            if (!(risk > 0.0 && risk < 1.0)) {
                throw InputError("--risk must be in (0, 1)");
            }
            return cmd_risk(input, risk, bound_h, peers);
        }
        if (simulate->parsed()) {
            return cmd_simulate(dist_spec, horizon, runs, seed, out_path);
        }
        if (plotdata->parsed()) return cmd_plotdata(input, format, out_path);
        if (report->parsed()) return cmd_report(input, peers, seed, out_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
