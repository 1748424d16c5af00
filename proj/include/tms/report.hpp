#pragma once

#include "tms/audit.hpp"

#include <json.hpp>

#include <string>

namespace tms {

nlohmann::json to_json(const InstanceSummary& s);
nlohmann::json to_json(const PairStretch& p);
nlohmann::json to_json(const StretchReport& r);
nlohmann::json to_json(const LinfPropertyReport& r);
nlohmann::json to_json(const LowerBoundReport& r);

/// Adds "timestamp" (UTC, ISO 8601) to a report object.
void stamp(nlohmann::json& report);

/// Fixed-width human-readable summary.
std::string format_table(const StretchReport& r);
std::string format_table(const LowerBoundReport& r);

}  // namespace tms
