#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "olycost/errors.hpp"
#include "olycost/sim.hpp"

using namespace olycost;

TEST_CASE("distribution specs parse and round-trip") {
    const SimDistribution p = parse_distribution("pareto:1.2:1");
    CHECK(p.kind == DistKind::pareto);
    CHECK(p.a == 1.2);
    CHECK(p.b == 1.0);
    CHECK(to_string(p) == "pareto:1.2:1");

    const SimDistribution g = parse_distribution("gaussian:0:1");
    CHECK(g.kind == DistKind::gaussian);

    CHECK_THROWS_AS(parse_distribution("pareto:1.2"), InputError);
    CHECK_THROWS_AS(parse_distribution("cauchy:0:1"), InputError);
    CHECK_THROWS_AS(parse_distribution("pareto:abc:1"), InputError);
    CHECK_THROWS_AS(parse_distribution("pareto:-1:1"), InputError);
    CHECK_THROWS_AS(parse_distribution("lognormal:0:-1"), InputError);
}

TEST_CASE("quantiles match the closed forms") {
    const SimDistribution p = parse_distribution("pareto:1:1");
    CHECK(quantile(p, 0.25) == doctest::Approx(4.0));
    CHECK(quantile(p, 1.0) == doctest::Approx(1.0));

    const SimDistribution g = parse_distribution("gaussian:10:2");
    CHECK(quantile(g, 0.5) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(quantile(g, 0.975) == doctest::Approx(10.0 + 2.0 * 1.959963984540054)
                                    .epsilon(1e-10));

    const SimDistribution ln = parse_distribution("lognormal:0:1");
    CHECK(quantile(ln, 0.5) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(quantile(p, 0.0), InputError);
    CHECK_THROWS_AS(quantile(p, 1.5), InputError);
}

TEST_CASE("sampling is a pure function of distribution, n and seed") {
    const SimDistribution dist = parse_distribution("pareto:1.5:1");
    const auto a = sample(dist, 1000, 42);
    const auto b = sample(dist, 1000, 42);
    CHECK(a == b);
    const auto c = sample(dist, 1000, 43);
    CHECK(a != c);
    for (double x : a) CHECK(x >= 1.0);
}

TEST_CASE("running-mean experiment is deterministic and ordered") {
    const SimDistribution dist = parse_distribution("lognormal:0.85:0.533");
    const SimulationTrace t1 = running_mean_experiment(dist, 50, 40, 7);
    const SimulationTrace t2 = running_mean_experiment(dist, 50, 40, 7);
    REQUIRE(t1.running_mean_quantiles.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(t1.running_mean_quantiles[i].q05 ==
              t2.running_mean_quantiles[i].q05);
        CHECK(t1.running_mean_quantiles[i].q05 <=
              t1.running_mean_quantiles[i].q50);
        CHECK(t1.running_mean_quantiles[i].q50 <=
              t1.running_mean_quantiles[i].q95);
    }
    CHECK(t1.record_count_mean == t2.record_count_mean);
    CHECK(t1.max_exceed_prob == t2.max_exceed_prob);
}

TEST_CASE("record exceedance over an equal split sits near one half") {
    // With iid draws and no ties the probability that the second half
    // contains the overall maximum is exactly 1/2.
    const SimDistribution dist = parse_distribution("gaussian:0:1");
    const double p = record_exceedance(dist, 50, 50, 400, 11);
    CHECK(p > 0.42);
    CHECK(p < 0.58);
}

TEST_CASE("thin-tailed running means contract, infinite-mean ones do not") {
    const SimDistribution gauss = parse_distribution("gaussian:0:1");
    const SimulationTrace g = running_mean_experiment(gauss, 2000, 200, 5);
    const StepQuantiles& g_final = g.running_mean_quantiles.back();
    CHECK(g_final.q95 - g_final.q05 < 0.1);

    const SimDistribution p3 = parse_distribution("pareto:3:1");
    const SimulationTrace t3 = running_mean_experiment(p3, 2000, 200, 5);
    const StepQuantiles& early3 = t3.running_mean_quantiles[19];
    const StepQuantiles& late3 = t3.running_mean_quantiles.back();
    CHECK(late3.q95 - late3.q05 < (early3.q95 - early3.q05) / 3.0);

    // Infinite-mean regime: the median running mean keeps rising and the
    // cross-run spread stays as large as the median itself instead of
    // collapsing to a narrow band.
    const SimDistribution p08 = parse_distribution("pareto:0.8:1");
    const SimulationTrace t08 = running_mean_experiment(p08, 2000, 200, 5);
    const StepQuantiles& early = t08.running_mean_quantiles[19];
    const StepQuantiles& late = t08.running_mean_quantiles.back();
    CHECK(late.q50 > 2.0 * early.q50);
    CHECK(late.q95 - late.q05 > late.q50);
}

TEST_CASE("per-run mean dispersion separates fat from thin tails") {
    // The thin-tailed comparator is a gaussian with the overrun sample's
    // moments (mean 2.72, sd 1.72).
    const double fat =
        mean_dispersion(parse_distribution("pareto:1.2:1"), 19, 1000, 21);
    const double thin =
        mean_dispersion(parse_distribution("gaussian:2.72:1.72"), 19, 1000, 21);
    CHECK(fat / thin > 3.0);
}

TEST_CASE("trace serialization is stable") {
    const SimDistribution dist = parse_distribution("pareto:0.8:1");
    const SimulationTrace trace = running_mean_experiment(dist, 20, 10, 3);

    const auto path = std::filesystem::temp_directory_path() / "trace.csv";
    write_trace_csv(trace, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "step,q05,q50,q95");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 20);
    std::filesystem::remove(path);

    const std::string json1 = trace_summary_json(trace);
    const std::string json2 = trace_summary_json(trace);
    CHECK(json1 == json2);
    CHECK(json1.find("\"regime\": \"infinite-mean\"") != std::string::npos);

    const SimulationTrace finite = running_mean_experiment(
        parse_distribution("gaussian:0:1"), 20, 10, 3);
    CHECK(trace_summary_json(finite).find("finite-mean") != std::string::npos);
}
