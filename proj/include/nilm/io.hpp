#pragma once

#include "nilm/core.hpp"
#include "nilm/derivative_analysis.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nilm {

// Trace CSV: `timestamp_s,power_w`, header optional. The rate is the inverse
// of the median timestamp step; every step must be within 1% of it.
SampleSeries parse_trace(std::istream& in, const std::string& source = "<stream>");
SampleSeries load_trace(const std::filesystem::path& path);
void write_trace(std::ostream& out, const SampleSeries& series);
void save_trace(const std::filesystem::path& path, const SampleSeries& series);

// Truth CSV: `timestamp_s,label`.
GroundTruthLog parse_ground_truth(std::istream& in, const std::string& source = "<stream>");
GroundTruthLog load_ground_truth(const std::filesystem::path& path);
void write_ground_truth(std::ostream& out, const GroundTruthLog& log);
void save_ground_truth(const std::filesystem::path& path, const GroundTruthLog& log);

// Event CSV: `index,timestamp_s,delta_watts`, six decimals.
void write_events(std::ostream& out, std::span<const DetectedEvent> events);
std::vector<DetectedEvent> parse_events(std::istream& in, const std::string& source = "<stream>");

// Plot-ready helpers for --emit-stages.
void write_values(std::ostream& out, const SampleSeries& series, std::span<const double> values,
                  const std::string& column);
void write_extrema(std::ostream& out, const SampleSeries& series, std::span<const Extremum> extrema);

// `key = value` lines named after HybridConfig fields. '#' starts a comment.
// Unknown keys and malformed values are ParseErrors.
HybridConfig parse_config(std::istream& in, const std::string& source = "<stream>",
                          HybridConfig base = {});
HybridConfig load_config(const std::filesystem::path& path, HybridConfig base = {});
void apply_config_value(HybridConfig& config, const std::string& key, const std::string& value);
void write_config(std::ostream& out, const HybridConfig& config);
const std::vector<std::string>& config_keys();

// Plain-text table followed by key=value lines.
void write_report(std::ostream& out, const EvaluationReport& report);

}  // namespace nilm
