#pragma once

#include "nilm/core.hpp"
#include "nilm/derivative_analysis.hpp"
#include "nilm/filtering_analysis.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace nilm {

struct StageCounts {
    std::size_t base = 0;
    std::size_t after_derivative = 0;
    std::size_t after_filtering = 0;

    friend bool operator==(const StageCounts&, const StageCounts&) = default;
};

struct PipelineResult {
    std::vector<DetectedEvent> events;
    StageCounts stage_counts;

    DerivativeSeries derivative_trace;
    std::vector<double> settle_derivative;    // short LOESS, drives the merge
    std::vector<double> smoothed_derivative;  // long LOESS, source of extrema
    std::vector<Extremum> extrema;            // all extrema of smoothed_derivative
    std::vector<Extremum> guard_extrema;      // those with |value| >= epsilon

    std::vector<DetectedEvent> base_events;
    std::vector<DetectedEvent> merged_events;
    std::vector<DetectedEvent> removed_events;
    std::vector<FilterVerdict> filter_verdicts;
    std::optional<std::size_t> trigger_index;
};

// Minimum series length accepted by detect_hybrid for this rate and config.
std::size_t minimum_series_length(double rate_hz, const HybridConfig& config);

// Base detection, derivative merge, then fluctuation filtering.
PipelineResult detect_hybrid(const SampleSeries& series, const HybridConfig& config);

}  // namespace nilm
