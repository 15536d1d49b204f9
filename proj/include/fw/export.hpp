#pragma once

#include <string>
#include <string_view>

#include "fw/state.hpp"

namespace fw {

enum class ExportFormat { FullRecord, RatingsCsv, ChatLog, ScenarioOutline, CriteriaCsv };

ExportFormat parse_export_format(std::string_view name);  // "full-record", "ratings-csv", ...
std::string_view to_string(ExportFormat f) noexcept;
std::string_view content_type(ExportFormat f) noexcept;

// Pure function of the folded state. `disclose` adds the alias -> submission
// origin audit table to the full record; the caller checks the role.
std::string export_document(const WorkshopState& state, ExportFormat format, bool disclose);

// Structured full record, shared by the export and the API's read endpoints.
json full_record(const WorkshopState& state, bool disclose);

}  // namespace fw
