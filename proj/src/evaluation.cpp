#include "nilm/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace nilm {

GroundTruthLog coalesce_simultaneous(const GroundTruthLog& log) {
    std::vector<GroundTruthEntry> out;
    for (const auto& e : log.entries()) {
        if (!out.empty() && out.back().timestamp_s == e.timestamp_s)
            out.back().label += " + " + e.label;
        else
            out.push_back(e);
    }
    return GroundTruthLog(std::move(out));
}

MatchResult match_events(std::span<const DetectedEvent> detected, const GroundTruthLog& truth,
                         double tolerance_s) {
    if (!(tolerance_s > 0.0))
        throw Error(ErrorCode::NegativeTolerance, "matching tolerance must be positive");
    for (std::size_t k = 1; k < detected.size(); ++k)
        if (detected[k].timestamp_s < detected[k - 1].timestamp_s)
            throw Error(ErrorCode::UnsortedInput, "detections must be sorted by time");

    MatchResult r;
    std::vector<bool> used(detected.size(), false);
    // Detections before `first` are older than every remaining truth window.
    std::size_t first = 0;
    for (std::size_t g = 0; g < truth.size(); ++g) {
        const double t = truth[g].timestamp_s;
        while (first < detected.size() && detected[first].timestamp_s < t - tolerance_s) ++first;
        std::size_t best = detected.size();
        double best_dist = 0.0;
        for (std::size_t k = first; k < detected.size(); ++k) {
            const double dist = std::abs(detected[k].timestamp_s - t);
            if (detected[k].timestamp_s > t + tolerance_s) break;
            if (used[k] || dist > tolerance_s) continue;
            if (best == detected.size() || dist < best_dist) {
                best = k;
                best_dist = dist;
            }
        }
        if (best != detected.size()) {
            used[best] = true;
            r.matches.emplace_back(best, g);
        }
    }
    r.tp = r.matches.size();
    r.fp = detected.size() - r.tp;
    r.fn = truth.size() - r.tp;
    return r;
}

EvaluationReport metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t E) {
    if (E == 0) throw Error(ErrorCode::ZeroGroundTruth, "no ground-truth events");
    if (tp + fn != E)
        throw Error(ErrorCode::InconsistentCounts,
                    "tp + fn = " + std::to_string(tp + fn) + " but E = " + std::to_string(E));
    EvaluationReport r;
    r.ground_truth_count = E;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    const auto e = static_cast<double>(E);
    r.tpr = static_cast<double>(tp) / e;
    r.fpr = static_cast<double>(fp) / e;
    r.fnr = 1.0 - r.tpr;
    return r;
}

EvaluationReport evaluate(std::span<const DetectedEvent> detected, const GroundTruthLog& truth,
                          double tolerance_s) {
    const GroundTruthLog coalesced = coalesce_simultaneous(truth);
    MatchResult m = match_events(detected, coalesced, tolerance_s);
    EvaluationReport r = metrics(m.tp, m.fp, m.fn, coalesced.size());
    r.matches = std::move(m.matches);
    return r;
}

}  // namespace nilm
