#pragma once

#include "nilm/core.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace nilm {

// Entries with identical timestamps become one entry; labels are joined
// with " + ".
GroundTruthLog coalesce_simultaneous(const GroundTruthLog& log);

struct MatchResult {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    // (detected index, ground-truth index)
    std::vector<std::pair<std::size_t, std::size_t>> matches;
};

// Greedy one-to-one matching. Truth entries are visited in time order and
// take the nearest unmatched detection within the tolerance; ties go to the
// earlier detection.
MatchResult match_events(std::span<const DetectedEvent> detected, const GroundTruthLog& truth,
                         double tolerance_s);

// Rates divide by E. fnr is computed as 1 - tpr so that tpr + fnr == 1.
EvaluationReport metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t E);

// Coalesce, match and score.
EvaluationReport evaluate(std::span<const DetectedEvent> detected, const GroundTruthLog& truth,
                          double tolerance_s);

}  // namespace nilm
