#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "olycost/dataset.hpp"
#include "olycost/errors.hpp"

using namespace olycost;

namespace {

const std::string kDataPath = std::string(OLYCOST_DATA_DIR) + "/olympics.csv";

std::filesystem::path temp_csv(const std::string& name,
                               const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

constexpr const char* kHeader =
    "name,year,season,country,events,athletes,outturn_cost_busd2015,"
    "overrun_pct_real\n";

} // namespace

TEST_CASE("bundled dataset loads with expected shape") {
    const GamesTable table = load_games_csv(kDataPath);
    CHECK(table.records.size() == 30);
    CHECK(std::count_if(table.records.begin(), table.records.end(),
                        [](const GamesRecord& r) {
                            return r.outturn_cost.has_value();
                        }) == 25);
    CHECK(std::count_if(table.records.begin(), table.records.end(),
                        [](const GamesRecord& r) {
                            return r.overrun_pct.has_value();
                        }) == 19);
    CHECK(std::is_sorted(table.records.begin(), table.records.end(),
                         [](const GamesRecord& a, const GamesRecord& b) {
                             return a.year < b.year;
                         }));
    CHECK(validate(table).accepted());
}

TEST_CASE("save/load round-trips the bundled dataset") {
    const GamesTable table = load_games_csv(kDataPath);
    const auto path = std::filesystem::temp_directory_path() / "roundtrip.csv";
    save_games_csv(table, path.string());
    const GamesTable again = load_games_csv(path.string());
    REQUIRE(again.records.size() == table.records.size());
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        const GamesRecord& a = table.records[i];
        const GamesRecord& b = again.records[i];
        CHECK(a.name == b.name);
        CHECK(a.year == b.year);
        CHECK(a.season == b.season);
        CHECK(a.country == b.country);
        CHECK(a.events == b.events);
        CHECK(a.athletes == b.athletes);
        CHECK(a.outturn_cost == b.outturn_cost);
        CHECK(a.overrun_pct == b.overrun_pct);
    }
    std::filesystem::remove(path);
}

TEST_CASE("loader rejects malformed input") {
    CHECK_THROWS_AS(load_games_csv("/nonexistent/file.csv"), InputError);

    const auto bad_header =
        temp_csv("bad_header.csv", "name,year\nX,2000\n");
    CHECK_THROWS_AS(load_games_csv(bad_header.string()), InputError);

    const auto bad_cell = temp_csv(
        "bad_cell.csv",
        std::string(kHeader) + "X,not_a_year,summer,A,10,100,1.0,50\n");
    CHECK_THROWS_AS(load_games_csv(bad_cell.string()), InputError);

    const auto dup = temp_csv(
        "dup.csv", std::string(kHeader) +
                       "X,2000,summer,A,10,100,1.0,50\n"
                       "Y,2000,summer,B,11,110,2.0,60\n");
    CHECK_THROWS_AS(load_games_csv(dup.string()), InputError);

    std::filesystem::remove(bad_header);
    std::filesystem::remove(bad_cell);
    std::filesystem::remove(dup);
}

TEST_CASE("validation flags impossible and extreme overruns") {
    const auto path = temp_csv(
        "invalid.csv", std::string(kHeader) +
                           "A,2000,summer,A,10,100,1.0,-150\n"
                           "B,2004,summer,B,10,100,1.0,1500\n"
                           "C,2008,summer,C,10,100,-1.0,50\n");
    const GamesTable table = load_games_csv(path.string());
    const ValidationReport report = validate(table);
    CHECK_FALSE(report.accepted());
    CHECK(report.errors.size() >= 2);   // overrun below -100, negative cost
    CHECK(report.warnings.size() >= 1); // overrun above 1000
    std::filesystem::remove(path);
}

TEST_CASE("overrun ratios convert percent to multiples per cohort") {
    const GamesTable table = load_games_csv(kDataPath);
    const OverrunSample all = overrun_ratios(table, CohortFilter::all);
    CHECK(all.ratios.size() == 19);
    CHECK(all.labels.size() == 19);
    for (double r : all.ratios) CHECK(r > 0.0);

    const OverrunSample summer = overrun_ratios(table, CohortFilter::summer);
    const OverrunSample winter = overrun_ratios(table, CohortFilter::winter);
    CHECK(summer.ratios.size() + winter.ratios.size() == 19);

    // A 76 percent overrun is a 1.76 ratio.
    const auto it =
        std::find(all.labels.begin(), all.labels.end(), "London 2012");
    REQUIRE(it != all.labels.end());
    CHECK(all.ratios[static_cast<std::size_t>(it - all.labels.begin())] ==
          doctest::Approx(1.76));

    const auto empty = temp_csv("nooverrun.csv",
                                std::string(kHeader) +
                                    "A,2000,summer,A,10,100,1.0,\n");
    const GamesTable t2 = load_games_csv(empty.string());
    CHECK_THROWS_AS(overrun_ratios(t2, CohortFilter::all), InputError);
    std::filesystem::remove(empty);
}

TEST_CASE("unit costs divide billions into millions per event and athlete") {
    const GamesTable table = load_games_csv(kDataPath);
    const UnitCostResult unit = derive_unit_costs(table);
    CHECK(unit.rows.size() == 25);
    CHECK(unit.skipped.size() == 5);
    for (const UnitCostRow& row : unit.rows) {
        CHECK(row.cost_per_event > 0.0);
        CHECK(row.cost_per_athlete > 0.0);
    }
    // London 2012: 14.957 billion, 302 events, 10568 athletes.
    const auto it = std::find_if(
        unit.rows.begin(), unit.rows.end(),
        [](const UnitCostRow& r) { return r.name == "London 2012"; });
    REQUIRE(it != unit.rows.end());
    CHECK(it->cost_per_event == doctest::Approx(14.957 * 1000.0 / 302.0));
    CHECK(it->cost_per_athlete == doctest::Approx(14.957 * 1000.0 / 10568.0));
}
