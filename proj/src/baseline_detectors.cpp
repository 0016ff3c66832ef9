#include "nilm/baseline_detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nilm {

CusumTrace cusum(const SampleSeries& series, std::size_t n, CusumVariant variant) {
    validate_series(series);
    if (n == 0) throw Error(ErrorCode::InvalidWindow, "CUSUM window must be at least 1");
    if (series.size() < n)
        throw Error(ErrorCode::SeriesTooShort, "CUSUM window exceeds series length");
    const auto x = series.values();
    const std::size_t N = x.size();

    // Direct window sums; O(N n) but bit-for-bit reproducible.
    CusumTrace trace{std::vector<double>(N, 0.0), variant};
    for (std::size_t i = 1; i < N; ++i) {
        const std::size_t end = std::min(N, i + n);
        double sum = 0.0;
        for (std::size_t k = i; k < end; ++k) sum += x[k];
        const double dev = x[i] - sum / static_cast<double>(end - i);
        trace.values[i] = trace.values[i - 1] + (variant == CusumVariant::Linear ? dev : dev * dev);
    }
    return trace;
}

namespace {

double resolve_sigma_sq(std::span<const double> x, const LldConfig& config) {
    if (config.sigma_sq) return *config.sigma_sq;
    const std::size_t w = config.pre_window_samples;
    const double mean = std::accumulate(x.begin(), x.begin() + w, 0.0) / static_cast<double>(w);
    double ss = 0.0;
    for (std::size_t i = 0; i < w; ++i) ss += (x[i] - mean) * (x[i] - mean);
    return ss / static_cast<double>(w);
}

void check_lld(const SampleSeries& series, const LldConfig& config) {
    validate_series(series);
    if (config.pre_window_samples == 0 || config.maxima_precision_samples == 0 ||
        !(config.p_th_watts > 0.0))
        throw Error(ErrorCode::InvalidConfig, "LLD parameters must be positive");
    if (series.size() < 2 * config.pre_window_samples + 1)
        throw Error(ErrorCode::SeriesTooShort, "series shorter than 2 * pre_window + 1");
}

}  // namespace

std::vector<double> lld_statistic(const SampleSeries& series, const LldConfig& config) {
    check_lld(series, config);
    const auto x = series.values();
    const double s2 = resolve_sigma_sq(x, config);
    if (!(s2 > 0.0) || !std::isfinite(s2))
        throw Error(ErrorCode::NonPositiveVariance, "sigma^2 must be positive");

    const std::size_t N = x.size();
    const std::size_t w = config.pre_window_samples;
    std::vector<double> ds(N, 0.0);
    const auto wd = static_cast<double>(w);
    for (std::size_t i = w; i + w < N; ++i) {
        const double mu0 = std::accumulate(x.begin() + (i - w), x.begin() + i, 0.0) / wd;
        const double mu1 = std::accumulate(x.begin() + (i + 1), x.begin() + (i + w + 1), 0.0) / wd;
        if (std::abs(mu1 - mu0) > config.p_th_watts)
            ds[i] = (mu1 - mu0) / s2 * std::abs(x[i] - (mu1 + mu0) / 2.0);
    }
    return ds;
}

std::vector<DetectedEvent> lld_max(const SampleSeries& series, const LldConfig& config) {
    const std::vector<double> ds = lld_statistic(series, config);
    const auto x = series.values();
    const std::size_t N = ds.size();
    const std::size_t w = config.pre_window_samples;
    const std::size_t M = config.maxima_precision_samples;

    std::vector<DetectedEvent> events;
    for (std::size_t i = w; i + w < N; ++i) {
        const double a = std::abs(ds[i]);
        if (a == 0.0) continue;
        const std::size_t lo = i >= M ? i - M : 0;
        const std::size_t hi = std::min(N - 1, i + M);
        bool strict_max = true;
        for (std::size_t j = lo; j <= hi && strict_max; ++j)
            if (j != i && !(a > std::abs(ds[j]))) strict_max = false;
        if (!strict_max) continue;
        const double mu0 =
            std::accumulate(x.begin() + (i - w), x.begin() + i, 0.0) / static_cast<double>(w);
        const double mu1 = std::accumulate(x.begin() + (i + 1), x.begin() + (i + w + 1), 0.0) /
                           static_cast<double>(w);
        events.push_back(make_event(series, i, mu1 - mu0, EventStage::Final));
    }
    return events;
}

}  // namespace nilm
