#include "nilm/filtering_analysis.hpp"

#include "nilm/base_detector.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace nilm {

std::string_view to_string(FilterReason reason) noexcept {
    switch (reason) {
        case FilterReason::NotTriggered: return "not_triggered";
        case FilterReason::SurvivedRefilter: return "survived_refilter";
        case FilterReason::RemovedAsFluctuation: return "removed_as_fluctuation";
        case FilterReason::ProtectedByExtremum: return "protected_by_extremum";
    }
    return "unknown";
}

namespace {

void check_sg_args(std::size_t window, std::size_t order) {
    if (window < 3 || window % 2 == 0)
        throw Error(ErrorCode::InvalidWindow, "Savitzky-Golay window must be odd and >= 3");
    if (order >= window)
        throw Error(ErrorCode::OrderTooHigh, "polynomial order must be below the window size");
}

// Rows: fitted value at each window position as a weighted sum of the window.
Eigen::MatrixXd sg_projection(std::size_t window, std::size_t order) {
    const auto W = static_cast<Eigen::Index>(window);
    const auto P = static_cast<Eigen::Index>(order) + 1;
    const double half = static_cast<double>(window / 2);
    // Scaled abscissa keeps the Vandermonde matrix well conditioned.
    Eigen::MatrixXd V(W, P);
    for (Eigen::Index r = 0; r < W; ++r) {
        const double t = (static_cast<double>(r) - half) / half;
        double p = 1.0;
        for (Eigen::Index c = 0; c < P; ++c) {
            V(r, c) = p;
            p *= t;
        }
    }
    // Hat matrix V (V^T V)^-1 V^T via QR.
    const Eigen::MatrixXd coeffs = V.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(W, W));
    return V * coeffs;
}

}  // namespace

std::vector<double> savitzky_golay_weights(std::size_t window, std::size_t order,
                                           std::ptrdiff_t position) {
    check_sg_args(window, order);
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    if (position < -half || position > half)
        throw Error(ErrorCode::InvalidWindow, "position outside the window");
    const Eigen::MatrixXd H = sg_projection(window, order);
    const Eigen::Index row = position + half;
    std::vector<double> w(window);
    for (std::size_t c = 0; c < window; ++c) w[c] = H(row, static_cast<Eigen::Index>(c));
    return w;
}

std::vector<double> savitzky_golay(std::span<const double> x, std::size_t window, std::size_t order) {
    check_sg_args(window, order);
    if (window > x.size())
        throw Error(ErrorCode::InvalidWindow, "Savitzky-Golay window " + std::to_string(window) +
                                                  " exceeds series length " +
                                                  std::to_string(x.size()));
    const Eigen::MatrixXd H = sg_projection(window, order);
    const std::size_t half = window / 2;
    const std::size_t N = x.size();
    std::vector<double> y(N);

    auto apply_row = [&](std::size_t row, std::size_t start) {
        double s = 0.0;
        for (std::size_t c = 0; c < window; ++c)
            s += H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) * x[start + c];
        return s;
    };

    for (std::size_t j = half; j + half < N; ++j) y[j] = apply_row(half, j - half);
    for (std::size_t j = 0; j < half; ++j) {
        y[j] = apply_row(j, 0);
        y[N - half + j] = apply_row(half + 1 + j, N - window);
    }
    return y;
}

std::optional<std::size_t> fluctuation_trigger_index(const SampleSeries& series,
                                                     std::span<const DetectedEvent> candidates,
                                                     const HybridConfig& config) {
    const auto first_on = std::find_if(candidates.begin(), candidates.end(),
                                       [](const DetectedEvent& e) { return e.delta_watts > 0.0; });
    if (first_on == candidates.end()) return std::nullopt;
    const auto x = series.values();
    for (std::size_t j = first_on->index; j < x.size(); ++j)
        if (x[j] > config.fluctuation_trigger_watts) return j;
    return std::nullopt;
}

RefilterResult refilter_events_detailed(const SampleSeries& series,
                                        std::span<const DetectedEvent> candidates,
                                        std::span<const Extremum> extrema,
                                        const HybridConfig& config) {
    validate_series(series);
    config.validate();
    for (const auto& c : candidates)
        if (c.index >= series.size())
            throw Error(ErrorCode::MisalignedInput, "candidate index beyond series end");
    for (const auto& e : extrema)
        if (e.index >= series.size())
            throw Error(ErrorCode::MisalignedInput, "extremum index beyond series end");

    RefilterResult result;
    result.trigger_index = fluctuation_trigger_index(series, candidates, config);

    auto keep = [&](const DetectedEvent& c, FilterReason why) {
        DetectedEvent e = c;
        e.stage = EventStage::Final;
        result.events.push_back(e);
        result.verdicts.push_back({c.index, true, why});
    };

    if (!result.trigger_index) {
        for (const auto& c : candidates) keep(c, FilterReason::NotTriggered);
        return result;
    }

    const SampleSeries filtered = series.with_values(
        savitzky_golay(series.values(), config.sg_window_samples, config.sg_poly_order));
    result.redetected = detect_base(filtered, config);

    std::vector<std::size_t> redetected_idx;
    redetected_idx.reserve(result.redetected.size());
    for (const auto& e : result.redetected) redetected_idx.push_back(e.index);
    std::vector<std::size_t> extremum_idx;
    extremum_idx.reserve(extrema.size());
    for (const auto& e : extrema) extremum_idx.push_back(e.index);
    std::sort(extremum_idx.begin(), extremum_idx.end());

    const double rate = series.sampling_rate_hz();
    const double tolerance = config.eval_match_tolerance_s * rate + 1e-9;
    const std::size_t radius = seconds_to_samples(config.time_limit_s, rate);

    // Distance from idx to the closest entry of a sorted index list.
    auto nearest = [](const std::vector<std::size_t>& sorted, std::size_t idx) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), idx);
        std::size_t best = static_cast<std::size_t>(-1);
        if (it != sorted.end()) best = *it - idx;
        if (it != sorted.begin()) best = std::min(best, idx - *std::prev(it));
        return best;
    };

    for (const auto& c : candidates) {
        if (c.index < *result.trigger_index) {
            keep(c, FilterReason::NotTriggered);
            continue;
        }
        if (static_cast<double>(nearest(redetected_idx, c.index)) <= tolerance) {
            keep(c, FilterReason::SurvivedRefilter);
        } else if (nearest(extremum_idx, c.index) <= radius) {
            keep(c, FilterReason::ProtectedByExtremum);
        } else {
            DetectedEvent e = c;
            e.stage = EventStage::FilterRemoved;
            result.removed.push_back(e);
            result.verdicts.push_back({c.index, false, FilterReason::RemovedAsFluctuation});
        }
    }
    return result;
}

std::vector<DetectedEvent> refilter_events(const SampleSeries& series,
                                           std::span<const DetectedEvent> candidates,
                                           std::span<const Extremum> extrema,
                                           const HybridConfig& config) {
    return refilter_events_detailed(series, candidates, extrema, config).events;
}

}  // namespace nilm
