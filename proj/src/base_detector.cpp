#include "nilm/base_detector.hpp"

#include <cmath>
#include <numeric>

namespace nilm {

namespace {

constexpr std::size_t kResumEvery = 1024;  // bounds drift of the rolling sums

template <typename Fn>
void for_each_mean_delta(std::span<const double> x, std::size_t n, Fn&& fn) {
    const std::size_t N = x.size();
    if (N < 2 * n + 1) return;
    double before = 0.0;
    double after = 0.0;
    for (std::size_t c = n; c + n < N; ++c) {
        if ((c - n) % kResumEvery == 0) {
            before = std::accumulate(x.begin() + (c - n), x.begin() + c, 0.0);
            after = std::accumulate(x.begin() + (c + 1), x.begin() + (c + n + 1), 0.0);
        } else {
            before += x[c - 1] - x[c - n - 1];
            after += x[c + n] - x[c];
        }
        fn(c, (after - before) / static_cast<double>(n));
    }
}

std::size_t mean_window(const SampleSeries& series, const HybridConfig& config) {
    return seconds_to_samples(config.mean_window_s, series.sampling_rate_hz());
}

void require_length(const SampleSeries& series, std::size_t n) {
    if (series.size() < 2 * n + 1)
        throw Error(ErrorCode::SeriesTooShort,
                    "series of " + std::to_string(series.size()) + " samples needs at least " +
                        std::to_string(2 * n + 1) + " for a mean window of " + std::to_string(n));
}

}  // namespace

MeanPair moving_means(const SampleSeries& series, std::size_t center_index, std::size_t n) {
    if (n == 0 || center_index < n || center_index + n >= series.size())
        throw Error(ErrorCode::WindowOutOfBounds,
                    "center " + std::to_string(center_index) + " with window " + std::to_string(n));
    const auto x = series.values();
    const auto nn = static_cast<double>(n);
    MeanPair m;
    m.center_index = center_index;
    m.mean_before = std::accumulate(x.begin() + (center_index - n), x.begin() + center_index, 0.0) / nn;
    m.mean_after =
        std::accumulate(x.begin() + (center_index + 1), x.begin() + (center_index + n + 1), 0.0) / nn;
    return m;
}

std::vector<std::size_t> raw_alarms(const SampleSeries& series, const HybridConfig& config) {
    validate_series(series);
    const std::size_t n = mean_window(series, config);
    require_length(series, n);
    std::vector<std::size_t> alarms;
    const double pth = config.power_threshold_watts;
    for_each_mean_delta(series.values(), n, [&](std::size_t c, double d) {
        if (std::abs(d) > pth) alarms.push_back(c);
    });
    return alarms;
}

std::vector<DetectedEvent> detect_base(const SampleSeries& series, const HybridConfig& config) {
    validate_series(series);
    config.validate();
    const std::size_t n = mean_window(series, config);
    require_length(series, n);

    // An alarm opens a new cluster when the gap to the previous raw alarm
    // exceeds the time limit.
    const double limit_samples = config.time_limit_s * series.sampling_rate_hz();
    const double pth = config.power_threshold_watts;
    std::vector<DetectedEvent> events;
    bool have_last = false;
    std::size_t last = 0;
    for_each_mean_delta(series.values(), n, [&](std::size_t c, double d) {
        if (!(std::abs(d) > pth)) return;
        if (!have_last || static_cast<double>(c - last) > limit_samples + 1e-9)
            events.push_back(make_event(series, c, d, EventStage::Base));
        have_last = true;
        last = c;
    });
    return events;
}

}  // namespace nilm
