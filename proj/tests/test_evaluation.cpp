#include "nilm/evaluation.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace nilm;

namespace {

std::vector<DetectedEvent> events_at(const std::vector<double>& times) {
    std::vector<DetectedEvent> out;
    for (std::size_t k = 0; k < times.size(); ++k) out.push_back({k, times[k], 1.0, EventStage::Final});
    return out;
}

GroundTruthLog truth_at(const std::vector<double>& times) {
    std::vector<GroundTruthEntry> out;
    for (double t : times) out.push_back({t, "x"});
    return GroundTruthLog(std::move(out));
}

double pct(double r) { return std::round(r * 10000.0) / 100.0; }

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("coalescing joins identical timestamps") {
    const GroundTruthLog log({{1.0, "a"}, {1.0, "b"}, {2.0, "c"}, {3.0, "d"}, {3.0, "e"}, {3.0, "f"}});
    const GroundTruthLog c = coalesce_simultaneous(log);
    REQUIRE(c.size() == 3);
    CHECK(c[0].label == "a + b");
    CHECK(c[2].label == "d + e + f");
    CHECK(c[1].timestamp_s == 2.0);
}

TEST_CASE("coalescing 125 -> 121 and 904 -> 889") {
    // 125 entries with 8 simultaneous ones on 4 shared timestamps -> 121.
    std::vector<GroundTruthEntry> day;
    for (int k = 0; k < 117; ++k) day.push_back({static_cast<double>(k) * 10.0, "e"});
    for (int k = 0; k < 4; ++k) day.push_back({static_cast<double>(k) * 10.0 + 5.0, "s"});
    for (int k = 0; k < 4; ++k) day.push_back({static_cast<double>(k) * 10.0 + 5.0, "s"});
    std::sort(day.begin(), day.end(), [](auto& a, auto& b) { return a.timestamp_s < b.timestamp_s; });
    REQUIRE(day.size() == 125);
    CHECK(coalesce_simultaneous(GroundTruthLog(day)).size() == 121);

    // 904 entries, 30 of them sharing 15 timestamps -> 889.
    std::vector<GroundTruthEntry> week;
    for (int k = 0; k < 874; ++k) week.push_back({static_cast<double>(k), "e"});
    for (int k = 0; k < 15; ++k) {
        week.push_back({static_cast<double>(k) + 0.5, "p"});
        week.push_back({static_cast<double>(k) + 0.5, "q"});
    }
    std::sort(week.begin(), week.end(), [](auto& a, auto& b) { return a.timestamp_s < b.timestamp_s; });
    REQUIRE(week.size() == 904);
    CHECK(coalesce_simultaneous(GroundTruthLog(week)).size() == 889);
}

TEST_CASE("a perfect detector scores 100/0/0") {
    const std::vector<double> t = {1.0, 5.0, 9.5, 30.0};
    const EvaluationReport r = evaluate(events_at(t), truth_at(t), 1.0);
    CHECK(r.tp == 4);
    CHECK(r.fp == 0);
    CHECK(r.fn == 0);
    CHECK(r.tpr == 1.0);
    CHECK(r.fpr == 0.0);
    CHECK(r.fnr == 0.0);
}

TEST_CASE("118 detections against 121 events with one false alarm") {
    std::vector<double> truth, det;
    for (int k = 0; k < 121; ++k) truth.push_back(static_cast<double>(k) * 20.0);
    for (int k = 0; k < 117; ++k) det.push_back(static_cast<double>(k) * 20.0 + 0.3);
    det.push_back(121.0 * 20.0 + 500.0);
    const EvaluationReport r = evaluate(events_at(det), truth_at(truth), 1.0);
    CHECK(r.tp == 117);
    CHECK(r.fp == 1);
    CHECK(r.fn == 4);
    CHECK(pct(r.tpr) == doctest::Approx(96.69));
    CHECK(std::abs(pct(r.tpr) - 96.7) <= 0.05);
    CHECK(std::abs(pct(r.fpr) - 0.81) <= 0.05);
    CHECK(std::abs(pct(r.fnr) - 3.3) <= 0.05);
}

TEST_CASE("one detection cannot match two truths") {
    const MatchResult m = match_events(events_at({10.4}), truth_at({10.0, 11.0}), 0.5);
    CHECK(m.tp == 1);
    CHECK(m.fp == 0);
    CHECK(m.fn == 1);
    REQUIRE(m.matches.size() == 1);
    CHECK(m.matches[0] == std::pair<std::size_t, std::size_t>{0, 0});
}

TEST_CASE("ties go to the earlier detection") {
    const MatchResult m = match_events(events_at({9.5, 10.5}), truth_at({10.0}), 1.0);
    REQUIRE(m.matches.size() == 1);
    CHECK(m.matches[0].first == 0);
}

TEST_CASE("day and week reference rates reproduce from counts") {
    const EvaluationReport day = metrics(117, 1, 4, 121);
    CHECK(std::abs(day.tpr * 100.0 - 96.7) <= 0.05);
    CHECK(std::abs(day.fpr * 100.0 - 0.81) <= 0.05);
    CHECK(std::abs(day.fnr * 100.0 - 3.3) <= 0.05);
    const EvaluationReport week = metrics(837, 7, 52, 889);
    CHECK(std::abs(week.tpr * 100.0 - 94.15) <= 0.05);
    CHECK(std::abs(week.fpr * 100.0 - 0.79) <= 0.05);
    CHECK(std::abs(week.fnr * 100.0 - 5.85) <= 0.05);
}

TEST_CASE("metrics validation") {
    try {
        metrics(0, 3, 0, 0);
        FAIL("accepted E = 0");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroGroundTruth);
    }
    try {
        metrics(5, 0, 1, 7);
        FAIL("accepted inconsistent counts");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentCounts);
    }
    try {
        match_events(events_at({1.0}), truth_at({1.0}), 0.0);
        FAIL("accepted zero tolerance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeTolerance);
    }
    try {
        match_events(events_at({2.0, 1.0}), truth_at({1.0}), 1.0);
        FAIL("accepted unsorted detections");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsortedInput);
    }
}

TEST_CASE("greedy matching is valid and equals the maximum matching when events are sparse") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> det(rng() % 15), truth(1 + rng() % 15);
        for (auto& v : det) v = u(rng);
        for (auto& v : truth) v = u(rng);
        std::sort(det.begin(), det.end());
        std::sort(truth.begin(), truth.end());
        const double tol = 0.2 + static_cast<double>(rng() % 20) / 10.0;
        const MatchResult m = match_events(events_at(det), truth_at(truth), tol);

        // One-to-one, within tolerance, and never larger than the optimum.
        std::vector<bool> seen_d(det.size()), seen_t(truth.size());
        for (auto [d, g] : m.matches) {
            CHECK_FALSE(seen_d[d]);
            CHECK_FALSE(seen_t[g]);
            seen_d[d] = seen_t[g] = true;
            CHECK(std::abs(det[d] - truth[g]) <= tol);
        }
        const std::size_t best = oracle::max_matching(det, truth, tol);
        CHECK(m.tp <= best);
        CHECK(m.tp + m.fn == truth.size());
        CHECK(m.tp + m.fp == det.size());

        // Well-separated events leave no room for greedy mistakes.
        bool sparse = true;
        for (std::size_t k = 1; k < det.size(); ++k) sparse &= det[k] - det[k - 1] > 2.0 * tol;
        for (std::size_t k = 1; k < truth.size(); ++k) sparse &= truth[k] - truth[k - 1] > 2.0 * tol;
        if (sparse) CHECK(m.tp == best);
    }
}

TEST_CASE("shrinking the tolerance never increases true positives on sparse events") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> truth, det;
        double t = 0.0;
        for (int k = 0; k < 20; ++k) {
            t += 6.0 + static_cast<double>(rng() % 100) / 10.0;
            truth.push_back(t);
            if (rng() % 4) det.push_back(t + (static_cast<double>(rng() % 400) - 200.0) / 100.0);
        }
        std::size_t previous = truth.size();
        for (double tol : {2.5, 2.0, 1.5, 1.0, 0.5, 0.1}) {
            const std::size_t tp = match_events(events_at(det), truth_at(truth), tol).tp;
            CHECK(tp <= previous);
            previous = tp;
        }
    }
}

}
