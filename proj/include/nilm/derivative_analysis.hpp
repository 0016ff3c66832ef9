#pragma once

#include "nilm/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nilm {

struct DerivativeSeries {
    int order = 1;
    // Aligned to source indices; the first `order` entries are 0.
    std::vector<double> values;
    double spacing_h = 1.0;
};

enum class ExtremumKind { Peak, Valley };

struct Extremum {
    std::size_t index = 0;
    ExtremumKind kind = ExtremumKind::Peak;
    double value = 0.0;

    friend bool operator==(const Extremum&, const Extremum&) = default;
};

DerivativeSeries first_derivative(std::span<const double> values, double h = 1.0);
DerivativeSeries first_derivative(const SampleSeries& series, double h = 1.0);
DerivativeSeries second_derivative(std::span<const double> values, double h = 1.0);
DerivativeSeries second_derivative(const SampleSeries& series, double h = 1.0);

// Locally linear LOESS with tricube weights. The window is truncated at the
// boundaries; distances are normalised by half_width + 1 so that every
// sample inside the window carries weight.
std::vector<double> loess_smooth(std::span<const double> values, std::size_t window_samples);

// Strict interior peaks and valleys in index order.
std::vector<Extremum> detect_extrema(std::span<const double> values);

// Extrema whose magnitude reaches min_magnitude.
std::vector<Extremum> significant_extrema(std::span<const Extremum> extrema, double min_magnitude);

// Settle-time merge. A candidate stays separate from its predecessor when
// they are more than settle_threshold_s apart, or when |settle_derivative|
// stays below epsilon for longer than time_limit_s somewhere strictly
// between them. Otherwise it joins the predecessor's group, and each group
// keeps its earliest event.
std::vector<DetectedEvent> merge_transient_events(std::span<const DetectedEvent> candidates,
                                                  std::span<const double> settle_derivative,
                                                  const SampleSeries& series,
                                                  const HybridConfig& config);

}  // namespace nilm
