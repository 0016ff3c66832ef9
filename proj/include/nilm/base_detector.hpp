#pragma once

#include "nilm/core.hpp"

#include <cstddef>
#include <vector>

namespace nilm {

struct MeanPair {
    double mean_before = 0.0;
    double mean_after = 0.0;
    std::size_t center_index = 0;

    double delta() const noexcept { return mean_after - mean_before; }
};

// Means of the n samples strictly before and strictly after center_index.
MeanPair moving_means(const SampleSeries& series, std::size_t center_index, std::size_t n);

// Every eligible center whose mean change exceeds the power threshold,
// before time-limit clustering.
std::vector<std::size_t> raw_alarms(const SampleSeries& series, const HybridConfig& config);

// Moving average change with time limit. One event per alarm cluster, at the
// first alarm of the cluster.
std::vector<DetectedEvent> detect_base(const SampleSeries& series, const HybridConfig& config);

}  // namespace nilm
