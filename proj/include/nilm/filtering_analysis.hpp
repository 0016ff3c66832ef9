#pragma once

#include "nilm/core.hpp"
#include "nilm/derivative_analysis.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nilm {

enum class FilterReason {
    NotTriggered,          // precedes the fluctuation trigger, passed through
    SurvivedRefilter,      // re-detected on the filtered signal
    RemovedAsFluctuation,  // vanished after filtering and no extremum nearby
    ProtectedByExtremum,   // vanished after filtering but sits on an extremum
};

std::string_view to_string(FilterReason reason) noexcept;

struct FilterVerdict {
    std::size_t event_index = 0;
    bool kept = true;
    FilterReason reason = FilterReason::NotTriggered;
};

// Least-squares polynomial smoothing. Edge samples are evaluated on the
// polynomial of the first or last full window.
std::vector<double> savitzky_golay(std::span<const double> values, std::size_t window_samples,
                                   std::size_t poly_order);

// Smoothing weights for the sample at offset `position` (-half..half) of a
// window of the given size.
std::vector<double> savitzky_golay_weights(std::size_t window_samples, std::size_t poly_order,
                                           std::ptrdiff_t position);

// First sample at or after the first turn-on candidate whose power exceeds
// the fluctuation trigger.
std::optional<std::size_t> fluctuation_trigger_index(const SampleSeries& series,
                                                     std::span<const DetectedEvent> candidates,
                                                     const HybridConfig& config);

struct RefilterResult {
    std::vector<DetectedEvent> events;  // survivors, stage Final
    std::vector<DetectedEvent> removed;  // stage FilterRemoved
    std::vector<FilterVerdict> verdicts;  // one per candidate
    std::optional<std::size_t> trigger_index;
    std::vector<DetectedEvent> redetected;  // detect_base on the filtered series
};

// Candidates at or after the trigger index are checked against a re-run of
// detect_base on the Savitzky-Golay filtered series. Candidates with no
// re-detection within eval_match_tolerance_s are removed unless an extremum
// lies within seconds_to_samples(time_limit_s) of them.
RefilterResult refilter_events_detailed(const SampleSeries& series,
                                        std::span<const DetectedEvent> candidates,
                                        std::span<const Extremum> extrema,
                                        const HybridConfig& config);

std::vector<DetectedEvent> refilter_events(const SampleSeries& series,
                                           std::span<const DetectedEvent> candidates,
                                           std::span<const Extremum> extrema,
                                           const HybridConfig& config);

}  // namespace nilm
