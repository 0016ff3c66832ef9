#include "nilm/pipeline.hpp"

#include "nilm/base_detector.hpp"

#include <algorithm>

namespace nilm {

std::size_t minimum_series_length(double rate_hz, const HybridConfig& config) {
    const std::size_t n = seconds_to_samples(config.mean_window_s, rate_hz);
    return std::max({2 * n + 1, odd_window_samples(config.loess_window_s, rate_hz),
                     odd_window_samples(config.settle_window_s, rate_hz), config.sg_window_samples});
}

PipelineResult detect_hybrid(const SampleSeries& series, const HybridConfig& config) {
    validate_series(series);
    config.validate();
    const double rate = series.sampling_rate_hz();
    const std::size_t min_len = minimum_series_length(rate, config);
    if (series.size() < min_len)
        throw Error(ErrorCode::SeriesTooShort, "series of " + std::to_string(series.size()) +
                                                   " samples is shorter than the " +
                                                   std::to_string(min_len) +
                                                   " required by the configured windows");

    PipelineResult r;
    r.base_events = detect_base(series, config);

    r.derivative_trace = first_derivative(series, 1.0);
    r.settle_derivative =
        loess_smooth(r.derivative_trace.values, odd_window_samples(config.settle_window_s, rate));
    r.smoothed_derivative =
        loess_smooth(r.derivative_trace.values, odd_window_samples(config.loess_window_s, rate));
    r.extrema = detect_extrema(r.smoothed_derivative);
    r.guard_extrema = significant_extrema(r.extrema, config.derivative_epsilon);

    r.merged_events = merge_transient_events(r.base_events, r.settle_derivative, series, config);

    RefilterResult f = refilter_events_detailed(series, r.merged_events, r.guard_extrema, config);
    r.events = std::move(f.events);
    r.removed_events = std::move(f.removed);
    r.filter_verdicts = std::move(f.verdicts);
    r.trigger_index = f.trigger_index;

    r.stage_counts = {r.base_events.size(), r.merged_events.size(), r.events.size()};
    return r;
}

}  // namespace nilm
