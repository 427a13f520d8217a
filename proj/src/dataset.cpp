#include "olycost/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "olycost/errors.hpp"

namespace olycost {

namespace {

constexpr const char* kHeader =
    "name,year,season,country,events,athletes,outturn_cost_busd2015,"
    "overrun_pct_real";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double_cell(const std::string& cell, std::size_t row,
                         const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InputError("row " + std::to_string(row) + ", column " + column +
                         ": malformed numeric cell '" + cell + "'");
    }
    return value;
}

int parse_int_cell(const std::string& cell, std::size_t row,
                   const std::string& column) {
    int value = 0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InputError("row " + std::to_string(row) + ", column " + column +
                         ": malformed integer cell '" + cell + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

std::string to_string(Season s) {
    return s == Season::summer ? "summer" : "winter";
}

std::string to_string(CohortFilter f) {
    switch (f) {
        case CohortFilter::all: return "all";
        case CohortFilter::summer: return "summer";
        case CohortFilter::winter: return "winter";
    }
    return "all";
}

GamesTable load_games_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("'" + path + "' is empty; expected header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        throw InputError("'" + path + "': header does not match schema '" +
                         std::string(kHeader) + "'");
    }

    GamesTable table;
    table.provenance = std::filesystem::path(path).filename().string();
    std::set<std::pair<int, int>> seen;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != 8) {
            throw InputError("row " + std::to_string(row) + ": expected 8 cells, got " +
                             std::to_string(cells.size()));
        }
        GamesRecord rec;
        rec.name = cells[0];
        rec.year = parse_int_cell(cells[1], row, "year");
        if (cells[2] == "summer") {
            rec.season = Season::summer;
        } else if (cells[2] == "winter") {
            rec.season = Season::winter;
        } else {
            throw InputError("row " + std::to_string(row) +
                             ": season must be 'summer' or 'winter', got '" +
                             cells[2] + "'");
        }
        rec.country = cells[3];
        if (!cells[4].empty()) rec.events = parse_int_cell(cells[4], row, "events");
        if (!cells[5].empty()) rec.athletes = parse_int_cell(cells[5], row, "athletes");
        if (!cells[6].empty()) {
            rec.outturn_cost =
                parse_double_cell(cells[6], row, "outturn_cost_busd2015");
        }
        if (!cells[7].empty()) {
            rec.overrun_pct = parse_double_cell(cells[7], row, "overrun_pct_real");
        }
        const auto key = std::make_pair(rec.year, static_cast<int>(rec.season));
        if (!seen.insert(key).second) {
            throw InputError("row " + std::to_string(row) + ": duplicate (year, season) (" +
                             std::to_string(rec.year) + ", " + cells[2] + ")");
        }
        table.records.push_back(std::move(rec));
    }

    std::stable_sort(table.records.begin(), table.records.end(),
                     [](const GamesRecord& a, const GamesRecord& b) {
                         if (a.year != b.year) return a.year < b.year;
                         return static_cast<int>(a.season) < static_cast<int>(b.season);
                     });
    return table;
}

void save_games_csv(const GamesTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << kHeader << "\n";
    for (const GamesRecord& r : table.records) {
        out << r.name << ',' << r.year << ',' << to_string(r.season) << ','
            << r.country << ',';
        if (r.events) out << *r.events;
        out << ',';
        if (r.athletes) out << *r.athletes;
        out << ',';
        if (r.outturn_cost) out << format_double(*r.outturn_cost);
        out << ',';
        if (r.overrun_pct) out << format_double(*r.overrun_pct);
        out << "\n";
    }
}

ValidationReport validate(const GamesTable& table) {
    ValidationReport report;
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        const GamesRecord& r = table.records[i];
        if (r.year < 1896 || r.year > 2100) {
            report.errors.push_back({i, "year " + std::to_string(r.year) +
                                            " outside [1896, 2100]"});
        }
        if (r.overrun_pct && *r.overrun_pct <= -100.0) {
            report.errors.push_back(
                {i, "overrun_pct must be > -100 (cost cannot be negative)"});
        }
        if (r.overrun_pct && *r.overrun_pct > 1000.0) {
            report.warnings.push_back({i, "overrun_pct above 1000 percent"});
        }
        if (r.events && *r.events <= 0) {
            report.errors.push_back({i, "events must be positive"});
        }
        if (r.athletes && *r.athletes <= 0) {
            report.errors.push_back({i, "athletes must be positive"});
        }
        if (r.outturn_cost && *r.outturn_cost <= 0.0) {
            report.errors.push_back({i, "outturn_cost must be positive"});
        }
        const auto key = std::make_pair(r.year, static_cast<int>(r.season));
        if (!seen.insert(key).second) {
            report.errors.push_back({i, "duplicate (year, season) pair"});
        }
    }
    return report;
}

OverrunSample overrun_ratios(const GamesTable& table, CohortFilter filter) {
    OverrunSample sample;
    sample.filter = filter;
    for (const GamesRecord& r : table.records) {
        if (!r.overrun_pct) continue;
        if (filter == CohortFilter::summer && r.season != Season::summer) continue;
        if (filter == CohortFilter::winter && r.season != Season::winter) continue;
        sample.ratios.push_back(1.0 + *r.overrun_pct / 100.0);
        sample.labels.push_back(r.name);
    }
    if (sample.ratios.empty()) {
        throw InputError("no records with overrun data match filter '" +
                         to_string(filter) + "'");
    }
    return sample;
}

UnitCostResult derive_unit_costs(const GamesTable& table) {
    UnitCostResult result;
    for (const GamesRecord& r : table.records) {
        if (!r.outturn_cost || !r.events || !r.athletes) {
            result.skipped.push_back(r.name);
            continue;
        }
        UnitCostRow row;
        row.name = r.name;
        row.cost_per_event = *r.outturn_cost * 1000.0 / *r.events;
        row.cost_per_athlete = *r.outturn_cost * 1000.0 / *r.athletes;
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace olycost
