#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "olycost/dataset.hpp"

namespace olycost {

// One-shot analysis bundle over a games table: cohort summaries, exact
// tests, trend fits, distribution fits with tail-cutoff scan, model
// comparison, mean estimates, heuristics, uplifts and a seeded simulation
// summary. Keys are sorted and numbers serialize in shortest round-trip
// form, so the output is byte-stable for a given (table, seed).
nlohmann::json build_report(const GamesTable& table,
                            const std::string& peers_path,
                            std::uint64_t seed);

// Plot-data emission. ccdf: x,p_empirical,p_pareto,p_lognormal over the
// overrun ratios. cost-time: year,season,value for every record with cost.
// athlete-time: year,season,value,variant with "with_outlier" and
// "without_outlier" blocks (Sochi 2014 excluded from the latter).
std::string plotdata_csv(const GamesTable& table, const std::string& figure);

} // namespace olycost
