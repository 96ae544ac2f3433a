#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "couplemap/ensemble.hpp"
#include "couplemap/metrics.hpp"

namespace couplemap {

using Json = nlohmann::ordered_json;

// MeasureReport <-> flat JSON object keyed by measure name, plus bin_count,
// sample_count and flags.
Json to_json(const MeasureReport& report);
MeasureReport report_from_json(const Json& j);
MeasureReport load_report(const std::filesystem::path& path);

/// CSV with columns system,measure_name,mean,half_width,n,flags.
void write_summary_csv(std::span<const SystemSummary> systems, std::ostream& out);
std::vector<SystemSummary> read_summary_csv(std::istream& in);
std::vector<SystemSummary> load_summary_csv(const std::filesystem::path& path);

Json to_json(const SystemSummary& summary);
Json to_json(const ComparisonReport& report);

/// Writes text to a file, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// "%.17g" rendering used for every floating-point field in text outputs.
std::string format_double(double v);

}  // namespace couplemap
