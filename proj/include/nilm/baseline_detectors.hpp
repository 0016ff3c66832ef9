#pragma once

#include "nilm/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace nilm {

enum class CusumVariant { Linear, Squared };

struct CusumTrace {
    std::vector<double> values;
    CusumVariant variant = CusumVariant::Linear;
};

// S_0 = 0, S_i = S_{i-1} + g(x_i - Mean_i) with Mean_i the forward mean over
// [i, i + n - 1]; the window shrinks near the tail.
CusumTrace cusum(const SampleSeries& series, std::size_t n, CusumVariant variant);

struct LldConfig {
    std::size_t pre_window_samples = 6;
    double p_th_watts = 15.0;
    std::size_t maxima_precision_samples = 10;
    // Defaults to the variance of the first pre_window_samples samples.
    std::optional<double> sigma_sq;
};

// Log likelihood ratio statistic ds(i); zero outside eligible indices and
// wherever the mean change does not exceed p_th_watts.
std::vector<double> lld_statistic(const SampleSeries& series, const LldConfig& config);

// LLD-Max: events where |ds| is the strict maximum over [i - M, i + M].
std::vector<DetectedEvent> lld_max(const SampleSeries& series, const LldConfig& config);

}  // namespace nilm
