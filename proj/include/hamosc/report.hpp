#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamosc/criteria.hpp"
#include "hamosc/properties.hpp"

namespace hamosc {

/// {problem, criteria: [{id, status, hypotheses, traces}], simulation: {zeros, horizon}}
nlohmann::json report_to_json(const RunAllReport& r);

/// One row per criterion.
std::string verdict_table(const RunAllReport& r);

/// Table plus hypotheses, trace tails, notes and solved matrices.
std::string detailed_report(const RunAllReport& r);

/// Zero list with brackets, or "no zeros on [t0,T]".
std::string simulation_text(const SimulationSummary& s);

std::string properties_text(const std::vector<PropertyResult>& results);

}  // namespace hamosc
