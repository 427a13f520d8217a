#include "olycost/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "olycost/distfit.hpp"
#include "olycost/errors.hpp"
#include "olycost/sim.hpp"
#include "olycost/stats.hpp"
#include "olycost/tail_risk.hpp"
#include "olycost/vuong.hpp"

namespace olycost {

namespace {

nlohmann::json summary_json(const SummaryStats& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["sd"] = s.sd;
    j["min"] = s.min;
    j["max"] = s.max;
    if (!s.prop_above.empty()) {
        nlohmann::json props;
        for (const auto& [threshold, prop] : s.prop_above) {
            nlohmann::json p;
            p["threshold"] = threshold;
            p["proportion"] = prop;
            props.push_back(p);
        }
        j["prop_above"] = props;
    }
    return j;
}

nlohmann::json test_json(const TestResult& t) {
    nlohmann::json j;
    j["statistic_name"] = t.statistic_name;
    j["statistic"] = t.statistic;
    j["p_value"] = t.p_value;
    j["sidedness"] = (t.sidedness == Sidedness::two) ? "two" : "one";
    j["method"] =
        (t.method == TestMethod::exact) ? "exact" : "normal_approx";
    return j;
}

nlohmann::json trend_json(const TrendFit& t) {
    nlohmann::json j;
    j["slope"] = t.slope;
    j["intercept"] = t.intercept;
    j["t_stat"] = t.t_stat;
    j["p_value"] = t.p_value;
    j["n"] = t.n;
    return j;
}

nlohmann::json lognormal_json(const LognormalFit& f) {
    nlohmann::json j;
    j["mu"] = f.mu;
    j["sigma"] = f.sigma;
    j["n"] = f.n;
    j["log_likelihood"] = f.log_likelihood;
    if (f.truncation_min) j["truncation_min"] = *f.truncation_min;
    return j;
}

nlohmann::json pareto_json(const ParetoFit& f) {
    nlohmann::json j;
    j["xmin"] = f.xmin;
    j["alpha"] = f.alpha;
    j["n_tail"] = f.n_tail;
    j["log_likelihood"] = f.log_likelihood;
    return j;
}

nlohmann::json mean_json(const MeanEstimate& est) {
    nlohmann::json j;
    j["method"] = to_string(est.method);
    if (est.infinite) {
        j["value"] = "infinite";
    } else {
        j["value"] = est.value;
    }
    j["inputs"] = est.inputs;
    return j;
}

std::vector<std::pair<int, double>> cost_points(const GamesTable& table,
                                                Season season) {
    std::vector<std::pair<int, double>> pts;
    for (const GamesRecord& r : table.records) {
        if (r.season == season && r.outturn_cost) {
            pts.emplace_back(r.year, *r.outturn_cost);
        }
    }
    return pts;
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

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

nlohmann::json build_report(const GamesTable& table,
                            const std::string& peers_path,
                            std::uint64_t seed) {
    nlohmann::json report;

    // Dataset overview.
    {
        nlohmann::json j;
        j["provenance"] = table.provenance;
        j["records"] = table.records.size();
        j["with_cost"] = std::count_if(
            table.records.begin(), table.records.end(),
            [](const GamesRecord& r) { return r.outturn_cost.has_value(); });
        j["with_overrun"] = std::count_if(
            table.records.begin(), table.records.end(),
            [](const GamesRecord& r) { return r.overrun_pct.has_value(); });
        report["dataset"] = j;
    }

    const OverrunSample all = overrun_ratios(table, CohortFilter::all);
    const std::vector<double> thresholds = {1.5, 2.0, 3.0};

    // Cohort summaries: overrun ratios and costs.
    {
        nlohmann::json ratios;
        nlohmann::json costs;
        for (CohortFilter f :
             {CohortFilter::all, CohortFilter::summer, CohortFilter::winter}) {
            try {
                const OverrunSample s = overrun_ratios(table, f);
                ratios[to_string(f)] =
                    summary_json(summary(s.ratios, thresholds));
            } catch (const InputError&) {
                // Cohort has no overrun data; leave it out of the summary.
            }
            const std::vector<double> c = cohort_costs(table, f);
            if (!c.empty()) costs[to_string(f)] = summary_json(summary(c));
        }
        report["summary"]["ratios"] = ratios;
        report["summary"]["costs"] = costs;
    }

    // Unit costs.
    {
        const UnitCostResult unit = derive_unit_costs(table);
        nlohmann::json rows;
        for (const UnitCostRow& row : unit.rows) {
            nlohmann::json j;
            j["name"] = row.name;
            j["cost_per_event"] = row.cost_per_event;
            j["cost_per_athlete"] = row.cost_per_athlete;
            rows.push_back(j);
        }
        report["unit_costs"]["rows"] = rows;
        report["unit_costs"]["skipped"] = unit.skipped;
    }

    // Exact tests.
    {
        report["tests"]["wilcoxon"] = test_json(wilcoxon_signed_rank(all.ratios));
        try {
            const OverrunSample summer =
                overrun_ratios(table, CohortFilter::summer);
            const OverrunSample winter =
                overrun_ratios(table, CohortFilter::winter);
            report["tests"]["rank_sum"] =
                test_json(rank_sum(summer.ratios, winter.ratios));
        } catch (const InputError&) {
            report["tests"]["rank_sum"] = "insufficient data";
        }
    }

    // Cost trend per season.
    {
        for (Season season : {Season::summer, Season::winter}) {
            const auto pts = cost_points(table, season);
            if (pts.size() >= 3) {
                report["trend"][to_string(season)] = trend_json(log_trend(pts));
            }
        }
    }

    // Distribution fits.
    const LognormalFit lognormal = fit_lognormal(all.ratios);
    const double sample_min =
        *std::min_element(all.ratios.begin(), all.ratios.end());
    const ParetoFit pareto_min = fit_pareto_hill(all.ratios, sample_min);

    nlohmann::json fits;
    fits["lognormal"] = lognormal_json(lognormal);
    fits["lognormal"]["kurtosis"] = lognormal_kurtosis(lognormal);
    fits["pareto_at_min"] = pareto_json(pareto_min);

    bool have_scan = false;
    XminResult scan;
    if (all.ratios.size() >= 6) {
        scan = select_xmin(all.ratios);
        have_scan = true;
        nlohmann::json sj;
        sj["xmin"] = scan.xmin;
        sj["alpha"] = scan.alpha;
        sj["ks_distance"] = scan.ks_distance;
        sj["n_tail"] = scan.n_tail;
        nlohmann::json candidates;
        for (const XminCandidate& c : scan.scan) {
            nlohmann::json j;
            j["xmin"] = c.xmin;
            j["alpha"] = c.alpha;
            j["ks"] = c.ks;
            j["n_tail"] = c.n_tail;
            candidates.push_back(j);
        }
        sj["scan"] = candidates;
        fits["xmin_scan"] = sj;
    } else {
        fits["xmin_scan"] = "insufficient tail";
    }

    bool have_tail_fits = false;
    ParetoFit pareto_tail;
    LognormalFit trunc_lognormal;
    if (have_scan && scan.n_tail >= 5) {
        pareto_tail = fit_pareto_hill(all.ratios, scan.xmin);
        trunc_lognormal = fit_truncated_lognormal(all.ratios, scan.xmin);
        have_tail_fits = true;
        fits["pareto_at_selected"] = pareto_json(pareto_tail);
        fits["truncated_lognormal"] = lognormal_json(trunc_lognormal);
    } else {
        fits["pareto_at_selected"] = "insufficient tail";
        fits["truncated_lognormal"] = "insufficient tail";
    }

    try {
        const GpdFit gpd = fit_gpd(all.ratios, 1.0);
        nlohmann::json j;
        j["threshold"] = gpd.threshold;
        j["scale"] = gpd.scale;
        j["shape"] = gpd.shape;
        j["implied_alpha"] = std::isfinite(gpd.implied_alpha)
                                 ? nlohmann::json(gpd.implied_alpha)
                                 : nlohmann::json("infinite");
        j["n_exceed"] = gpd.n_exceed;
        j["log_likelihood"] = gpd.log_likelihood;
        fits["gpd_threshold_1"] = j;
    } catch (const Error& e) {
        fits["gpd_threshold_1"] = std::string("unavailable: ") + e.what();
    }
    report["fits"] = fits;

    // Model comparison on the selected tail, lognormal first so a negative
    // statistic favors the power law.
    if (have_tail_fits) {
        std::vector<double> tail;
        for (double x : all.ratios) {
            if (x >= scan.xmin) tail.push_back(x);
        }
        try {
            const VuongResult v = vuong_test(tail, ModelFit(trunc_lognormal),
                                             ModelFit(pareto_tail), scan.xmin);
            nlohmann::json j;
            j["r_normalized"] = v.r_normalized;
            j["p_two_sided"] = v.p_two_sided;
            j["n_tail"] = v.n_tail;
            j["per_point_llr_sd"] = v.per_point_llr_sd;
            j["order"] = "lognormal_vs_pareto";
            report["vuong"]["at_selected_xmin"] = j;
        } catch (const Error& e) {
            report["vuong"]["at_selected_xmin"] =
                std::string("unavailable: ") + e.what();
        }
    } else {
        report["vuong"] = "insufficient tail";
    }

    // Mean estimates.
    {
        nlohmann::json means;
        const SummaryStats s = summary(all.ratios);
        nlohmann::json sample_mean;
        sample_mean["method"] = "sample";
        sample_mean["value"] = s.mean;
        sample_mean["inputs"] = "raw ratios";
        means.push_back(sample_mean);
        means.push_back(mean_json(plug_in_mean(lognormal)));
        if (have_tail_fits) {
            means.push_back(mean_json(plug_in_mean(pareto_tail)));
            means.push_back(mean_json(spliced_mean(all.ratios, pareto_tail)));
        }
        if (sample_min > 1.0) {
            means.push_back(mean_json(shadow_mean_dual(all.ratios, 1.0, 10.0)));
        }
        report["means"] = means;
    }

    // Randomness classification at the selected tail exponent.
    if (have_tail_fits) {
        std::vector<PowerLawPeer> peers;
        if (!peers_path.empty()) peers = load_powerlaw_peers(peers_path);
        const RandomnessClass cls =
            classify_randomness(pareto_tail.alpha, std::move(peers));
        nlohmann::json j;
        j["alpha"] = cls.alpha;
        j["regime"] = to_string(cls.regime);
        nlohmann::json pj = nlohmann::json::array();
        for (const PowerLawPeer& p : cls.peers) {
            nlohmann::json one;
            one["event_type"] = p.event_type;
            one["alpha"] = p.alpha;
            pj.push_back(one);
        }
        j["peers"] = pj;
        report["randomness"] = j;
    }

    // Heuristics and uplifts.
    {
        std::vector<ModelFit> models;
        models.emplace_back(lognormal);
        if (have_tail_fits) {
            models.emplace_back(pareto_tail);
            models.emplace_back(trunc_lognormal);
        }
        const HeuristicReport h = evaluate_heuristics(all.ratios, models);
        nlohmann::json j;
        j["p_threefold_empirical"] = h.p_threefold_empirical;
        nlohmann::json per_model = nlohmann::json::array();
        for (const auto& [model, prob] : h.p_threefold_by_model) {
            nlohmann::json one;
            one["model"] = model;
            one["probability"] = prob;
            per_model.push_back(one);
        }
        j["p_threefold_by_model"] = per_model;
        j["true_mean_range_pct"] = {h.true_mean_range_pct.first,
                                    h.true_mean_range_pct.second};
        j["verdicts"] = h.verdicts;
        report["heuristics"] = j;

        nlohmann::json uplifts = nlohmann::json::array();
        for (double risk : {0.5, 0.2}) {
            const UpliftResult u = rcf_uplift(all.ratios, risk);
            nlohmann::json one;
            one["acceptable_risk"] = u.acceptable_risk;
            one["empirical_uplift_pct"] = u.empirical_uplift_pct;
            one["method"] = u.method;
            uplifts.push_back(one);
        }
        report["uplifts"] = uplifts;
    }

    // Seeded simulation summary: chance that the next four generations of
    // Games produce an overrun beyond the historical record.
    {
        const std::size_t n = all.ratios.size();
        SimDistribution dist{DistKind::pareto, 1.2, 1.0};
        nlohmann::json j;
        j["distribution"] = to_string(dist);
        j["seed"] = seed;
        j["record_exceedance_equal_split"] =
            record_exceedance(dist, n, n, 500, seed);
        j["record_exceedance_four_generations"] =
            record_exceedance(dist, n, 4 * n, 500, seed);
        report["simulation"] = j;
    }

    return report;
}

std::string plotdata_csv(const GamesTable& table, const std::string& figure) {
    std::ostringstream out;
    if (figure == "ccdf") {
        const OverrunSample all = overrun_ratios(table, CohortFilter::all);
        const LognormalFit lognormal = fit_lognormal(all.ratios);
        const double sample_min =
            *std::min_element(all.ratios.begin(), all.ratios.end());
        const ParetoFit pareto = fit_pareto_hill(all.ratios, sample_min);
        out << "x,p_empirical,p_pareto,p_lognormal\n";
        for (const auto& [x, p] : empirical_ccdf(all.ratios)) {
            out << format_double(x) << ',' << format_double(p) << ','
                << format_double(tail_probability(ModelFit(pareto), x)) << ','
                << format_double(tail_probability(ModelFit(lognormal), x))
                << "\n";
        }
    } else if (figure == "cost-time") {
        out << "year,season,value\n";
        for (const GamesRecord& r : table.records) {
            if (!r.outturn_cost) continue;
            out << r.year << ',' << to_string(r.season) << ','
                << format_double(*r.outturn_cost) << "\n";
        }
    } else if (figure == "athlete-time") {
        out << "year,season,value,variant\n";
        for (const char* variant : {"with_outlier", "without_outlier"}) {
            for (const GamesRecord& r : table.records) {
                if (!r.outturn_cost || !r.events || !r.athletes) continue;
                if (std::string(variant) == "without_outlier" &&
                    r.name == "Sochi 2014") {
                    continue;
                }
                out << r.year << ',' << to_string(r.season) << ','
                    << format_double(*r.outturn_cost * 1000.0 / *r.athletes)
                    << ',' << variant << "\n";
            }
        }
    } else {
        throw InputError("unknown figure '" + figure +
                         "' (expected ccdf, cost-time or athlete-time)");
    }
    return out.str();
}

} // namespace olycost
