#pragma once

#include <optional>
#include <string>
#include <vector>

namespace olycost {

enum class Season { summer, winter };

enum class CohortFilter { all, summer, winter };

std::string to_string(Season s);
std::string to_string(CohortFilter f);

// One Olympic edition. Optional fields are independently absent: cost can
// be known while the overrun is not, and vice versa.
struct GamesRecord {
    std::string name;
    int year = 0;
    Season season = Season::summer;
    std::string country;
    std::optional<int> events;
    std::optional<int> athletes;
    std::optional<double> outturn_cost;  // billions of 2015 USD
    std::optional<double> overrun_pct;   // percent, real terms
};

struct GamesTable {
    std::vector<GamesRecord> records;  // ordered by year, then season
    std::string provenance;
};

// Overrun ratios (1 + pct/100), the positive-valued sample every fit
// operates on. Labels run parallel to the ratios.
struct OverrunSample {
    std::vector<double> ratios;
    std::vector<std::string> labels;
    CohortFilter filter = CohortFilter::all;
};

struct ValidationIssue {
    std::size_t row = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    bool accepted() const { return errors.empty(); }
};

struct UnitCostRow {
    std::string name;
    double cost_per_event = 0.0;    // millions of 2015 USD
    double cost_per_athlete = 0.0;  // millions of 2015 USD
};

struct UnitCostResult {
    std::vector<UnitCostRow> rows;
    std::vector<std::string> skipped;  // records missing cost, events or athletes
};

// Loads the games CSV. Header must match
// name,year,season,country,events,athletes,outturn_cost_busd2015,overrun_pct_real
// exactly. Empty cells become absent optionals. Throws InputError on
// malformed cells or duplicate (year, season) pairs.
GamesTable load_games_csv(const std::string& path);

// Writes a table back in the same schema; load(save(t)) == t.
void save_games_csv(const GamesTable& table, const std::string& path);

// Checks table invariants; failures are carried in the report, not thrown.
ValidationReport validate(const GamesTable& table);

// Extracts overrun ratios for the given cohort. Throws InputError when no
// record matches.
OverrunSample overrun_ratios(const GamesTable& table, CohortFilter filter);

// Table 2 style derivation: cost * 1000 / events and / athletes. Records
// missing any of the three fields are skipped and listed.
UnitCostResult derive_unit_costs(const GamesTable& table);

} // namespace olycost
