#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nilm {

enum class ErrorCode {
    EmptySeries,
    NonPositiveRate,
    NonFiniteValue,
    NonPositiveDuration,
    WindowOutOfBounds,
    SeriesTooShort,
    WindowTooLarge,
    WindowTooSmall,
    MisalignedInput,
    InvalidWindow,
    OrderTooHigh,
    NonPositiveVariance,
    NegativeTolerance,
    ZeroGroundTruth,
    InconsistentCounts,
    InvalidConfig,
    ParseError,
    NonUniformSampling,
    EmptyFile,
    UnsortedInput,
    InvalidSpec,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Uniformly sampled scalar signal. Sample j sits at start_time + j / rate.
class SampleSeries {
public:
    SampleSeries() = default;
    SampleSeries(double sampling_rate_hz, std::vector<double> values, double start_time_s = 0.0)
        : rate_(sampling_rate_hz), start_(start_time_s), values_(std::move(values)) {}

    double sampling_rate_hz() const noexcept { return rate_; }
    double start_time_s() const noexcept { return start_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t j) const { return values_[j]; }
    double time_of(std::size_t j) const noexcept {
        return start_ + static_cast<double>(j) / rate_;
    }

    // Same rate and start, different samples (filtered copies etc.).
    SampleSeries with_values(std::vector<double> values) const {
        return SampleSeries(rate_, std::move(values), start_);
    }

private:
    double rate_ = 0.0;
    double start_ = 0.0;
    std::vector<double> values_;
};

enum class EventStage { Base, DerivativeMerged, FilterRemoved, Final };

std::string_view to_string(EventStage stage) noexcept;

struct DetectedEvent {
    std::size_t index = 0;
    double timestamp_s = 0.0;
    double delta_watts = 0.0;  // mean_after - mean_before
    EventStage stage = EventStage::Base;

    friend bool operator==(const DetectedEvent&, const DetectedEvent&) = default;
};

struct HybridConfig {
    double mean_window_s = 0.3;
    double power_threshold_watts = 15.0;
    double time_limit_s = 0.2;
    // Watts per sample at the native rate.
    double derivative_epsilon = 0.5;
    // Candidates further apart than this are never one transient.
    double settle_threshold_s = 3.0;
    // Smoother used for the extremum guard.
    double loess_window_s = 2.0;
    // Shorter smoother used by the settle test between candidates.
    double settle_window_s = 0.5;
    std::size_t sg_window_samples = 21;
    std::size_t sg_poly_order = 3;
    double fluctuation_trigger_watts = 1000.0;
    double eval_match_tolerance_s = 1.0;

    // Throws InvalidConfig naming the offending field.
    void validate() const;

    friend bool operator==(const HybridConfig&, const HybridConfig&) = default;
};

struct GroundTruthEntry {
    double timestamp_s = 0.0;
    std::string label;

    friend bool operator==(const GroundTruthEntry&, const GroundTruthEntry&) = default;
};

// Entries sorted by time; ties allowed.
class GroundTruthLog {
public:
    GroundTruthLog() = default;
    explicit GroundTruthLog(std::vector<GroundTruthEntry> entries);

    const std::vector<GroundTruthEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const GroundTruthEntry& operator[](std::size_t i) const { return entries_[i]; }

private:
    std::vector<GroundTruthEntry> entries_;
};

struct EvaluationReport {
    std::size_t ground_truth_count = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double tpr = 0.0;
    double fpr = 0.0;  // fp / E, not the classical false positive rate
    double fnr = 0.0;
    // (detected index, ground-truth index)
    std::vector<std::pair<std::size_t, std::size_t>> matches;
};

const SampleSeries& validate_series(const SampleSeries& series);

// max(1, round(duration_s * rate_hz))
std::size_t seconds_to_samples(double duration_s, double rate_hz);

// Like seconds_to_samples but bumped to the next odd count, minimum 3.
std::size_t odd_window_samples(double duration_s, double rate_hz);

DetectedEvent make_event(const SampleSeries& series, std::size_t index, double delta,
                         EventStage stage);

}  // namespace nilm
