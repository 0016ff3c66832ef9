#include "nilm/core.hpp"

#include <algorithm>
#include <cmath>

namespace nilm {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::NonPositiveRate: return "NonPositiveRate";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
        case ErrorCode::WindowOutOfBounds: return "WindowOutOfBounds";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::WindowTooLarge: return "WindowTooLarge";
        case ErrorCode::WindowTooSmall: return "WindowTooSmall";
        case ErrorCode::MisalignedInput: return "MisalignedInput";
        case ErrorCode::InvalidWindow: return "InvalidWindow";
        case ErrorCode::OrderTooHigh: return "OrderTooHigh";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::NegativeTolerance: return "NegativeTolerance";
        case ErrorCode::ZeroGroundTruth: return "ZeroGroundTruth";
        case ErrorCode::InconsistentCounts: return "InconsistentCounts";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonUniformSampling: return "NonUniformSampling";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::UnsortedInput: return "UnsortedInput";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

std::string_view to_string(EventStage stage) noexcept {
    switch (stage) {
        case EventStage::Base: return "base";
        case EventStage::DerivativeMerged: return "derivative_merged";
        case EventStage::FilterRemoved: return "filter_removed";
        case EventStage::Final: return "final";
    }
    return "unknown";
}

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be positive and finite");
}

}  // namespace

void HybridConfig::validate() const {
    require_positive(mean_window_s, "mean_window_s");
    require_positive(power_threshold_watts, "power_threshold_watts");
    require_positive(time_limit_s, "time_limit_s");
    require_positive(derivative_epsilon, "derivative_epsilon");
    require_positive(settle_threshold_s, "settle_threshold_s");
    require_positive(loess_window_s, "loess_window_s");
    require_positive(settle_window_s, "settle_window_s");
    require_positive(fluctuation_trigger_watts, "fluctuation_trigger_watts");
    require_positive(eval_match_tolerance_s, "eval_match_tolerance_s");
    if (sg_window_samples < 3 || sg_window_samples % 2 == 0)
        throw Error(ErrorCode::InvalidConfig, "sg_window_samples must be odd and >= 3");
    if (sg_poly_order >= sg_window_samples)
        throw Error(ErrorCode::InvalidConfig, "sg_poly_order must be < sg_window_samples");
    if (!(time_limit_s < settle_threshold_s))
        throw Error(ErrorCode::InvalidConfig, "time_limit_s must be < settle_threshold_s");
}

GroundTruthLog::GroundTruthLog(std::vector<GroundTruthEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].timestamp_s < entries_[i - 1].timestamp_s)
            throw Error(ErrorCode::UnsortedInput,
                        "ground truth entry " + std::to_string(i) + " precedes its predecessor");
    }
}

const SampleSeries& validate_series(const SampleSeries& series) {
    if (series.empty()) throw Error(ErrorCode::EmptySeries, "series has no samples");
    if (!(series.sampling_rate_hz() > 0.0) || !std::isfinite(series.sampling_rate_hz()))
        throw Error(ErrorCode::NonPositiveRate, "sampling rate must be positive");
    const auto v = series.values();
    const auto bad = std::find_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); });
    if (bad != v.end())
        throw Error(ErrorCode::NonFiniteValue,
                    "sample " + std::to_string(bad - v.begin()) + " is not finite");
    return series;
}

std::size_t seconds_to_samples(double duration_s, double rate_hz) {
    if (!(duration_s > 0.0)) throw Error(ErrorCode::NonPositiveDuration, "duration must be positive");
    if (!(rate_hz > 0.0)) throw Error(ErrorCode::NonPositiveRate, "rate must be positive");
    const double n = std::round(duration_s * rate_hz);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::size_t odd_window_samples(double duration_s, double rate_hz) {
    std::size_t n = seconds_to_samples(duration_s, rate_hz);
    if (n % 2 == 0) ++n;
    return std::max<std::size_t>(n, 3);
}

DetectedEvent make_event(const SampleSeries& series, std::size_t index, double delta,
                         EventStage stage) {
    return DetectedEvent{index, series.time_of(index), delta, stage};
}

}  // namespace nilm
