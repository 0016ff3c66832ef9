#include "nilm/derivative_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace nilm {

namespace {

void require_spacing(double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw Error(ErrorCode::InvalidConfig, "derivative spacing h must be positive");
}

}  // namespace

DerivativeSeries first_derivative(std::span<const double> x, double h) {
    require_spacing(h);
    if (x.size() < 2) throw Error(ErrorCode::SeriesTooShort, "first derivative needs 2 samples");
    DerivativeSeries d{1, std::vector<double>(x.size(), 0.0), h};
    for (std::size_t j = 1; j < x.size(); ++j) d.values[j] = (x[j] - x[j - 1]) / h;
    return d;
}

DerivativeSeries first_derivative(const SampleSeries& series, double h) {
    return first_derivative(series.values(), h);
}

DerivativeSeries second_derivative(std::span<const double> x, double h) {
    require_spacing(h);
    if (x.size() < 3) throw Error(ErrorCode::SeriesTooShort, "second derivative needs 3 samples");
    DerivativeSeries d{2, std::vector<double>(x.size(), 0.0), h};
    const double h2 = h * h;
    for (std::size_t j = 2; j < x.size(); ++j) d.values[j] = (x[j] - 2.0 * x[j - 1] + x[j - 2]) / h2;
    return d;
}

DerivativeSeries second_derivative(const SampleSeries& series, double h) {
    return second_derivative(series.values(), h);
}

std::vector<double> loess_smooth(std::span<const double> y, std::size_t window) {
    if (window < 3) throw Error(ErrorCode::WindowTooSmall, "LOESS window must be at least 3");
    if (window % 2 == 0) throw Error(ErrorCode::InvalidWindow, "LOESS window must be odd");
    if (window > y.size())
        throw Error(ErrorCode::WindowTooLarge, "LOESS window " + std::to_string(window) +
                                                   " exceeds series length " +
                                                   std::to_string(y.size()));
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const auto N = static_cast<std::ptrdiff_t>(y.size());

    std::vector<double> w(static_cast<std::size_t>(half) + 1);
    for (std::ptrdiff_t k = 0; k <= half; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(half + 1);
        const double a = 1.0 - u * u * u;
        w[static_cast<std::size_t>(k)] = a * a * a;
    }

    std::vector<double> out(y.size());
    for (std::ptrdiff_t j = 0; j < N; ++j) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, j - half);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(N - 1, j + half);
        // Weighted linear fit in local coordinate t = k - j, evaluated at t = 0.
        double sw = 0.0, st = 0.0, sy = 0.0;
        for (std::ptrdiff_t k = lo; k <= hi; ++k) {
            const double wk = w[static_cast<std::size_t>(std::abs(k - j))];
            sw += wk;
            st += wk * static_cast<double>(k - j);
            sy += wk * y[static_cast<std::size_t>(k)];
        }
        const double mt = st / sw;
        const double my = sy / sw;
        double stt = 0.0, sty = 0.0;
        for (std::ptrdiff_t k = lo; k <= hi; ++k) {
            const double wk = w[static_cast<std::size_t>(std::abs(k - j))];
            const double dt = static_cast<double>(k - j) - mt;
            stt += wk * dt * dt;
            sty += wk * dt * (y[static_cast<std::size_t>(k)] - my);
        }
        const double slope = stt > 0.0 ? sty / stt : 0.0;
        out[static_cast<std::size_t>(j)] = my - slope * mt;
    }
    return out;
}

std::vector<Extremum> detect_extrema(std::span<const double> v) {
    if (v.size() < 3) throw Error(ErrorCode::SeriesTooShort, "extremum detection needs 3 samples");
    std::vector<Extremum> out;
    for (std::size_t t = 1; t + 1 < v.size(); ++t) {
        if (v[t] > v[t - 1] && v[t] > v[t + 1])
            out.push_back({t, ExtremumKind::Peak, v[t]});
        else if (v[t] < v[t - 1] && v[t] < v[t + 1])
            out.push_back({t, ExtremumKind::Valley, v[t]});
    }
    return out;
}

std::vector<Extremum> significant_extrema(std::span<const Extremum> extrema, double min_magnitude) {
    std::vector<Extremum> out;
    std::copy_if(extrema.begin(), extrema.end(), std::back_inserter(out),
                 [&](const Extremum& e) { return std::abs(e.value) >= min_magnitude; });
    return out;
}

std::vector<DetectedEvent> merge_transient_events(std::span<const DetectedEvent> candidates,
                                                  std::span<const double> settle_derivative,
                                                  const SampleSeries& series,
                                                  const HybridConfig& config) {
    if (settle_derivative.size() != series.size())
        throw Error(ErrorCode::MisalignedInput,
                    "derivative has " + std::to_string(settle_derivative.size()) +
                        " samples, series has " + std::to_string(series.size()));
    for (std::size_t k = 1; k < candidates.size(); ++k)
        if (candidates[k].index <= candidates[k - 1].index)
            throw Error(ErrorCode::UnsortedInput, "candidates must be sorted by index");
    for (const auto& c : candidates)
        if (c.index >= series.size())
            throw Error(ErrorCode::MisalignedInput, "candidate index beyond series end");

    const double rate = series.sampling_rate_hz();
    const double eps = config.derivative_epsilon;
    const double max_gap = config.settle_threshold_s * rate;
    const double min_run = config.time_limit_s * rate;

    auto settled_between = [&](std::size_t a, std::size_t b) {
        std::size_t run = 0;
        for (std::size_t k = a + 1; k < b; ++k) {
            run = std::abs(settle_derivative[k]) < eps ? run + 1 : 0;
            if (static_cast<double>(run) > min_run + 1e-9) return true;
        }
        return false;
    };

    std::vector<DetectedEvent> out;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        bool separate = k == 0;
        if (!separate) {
            const std::size_t a = candidates[k - 1].index;
            const std::size_t b = candidates[k].index;
            separate = static_cast<double>(b - a) > max_gap + 1e-9 || settled_between(a, b);
        }
        if (separate) {
            DetectedEvent e = candidates[k];
            e.stage = EventStage::DerivativeMerged;
            out.push_back(e);
        }
    }
    return out;
}

}  // namespace nilm
