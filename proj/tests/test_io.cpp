#include "nilm/evaluation.hpp"
#include "nilm/io.hpp"
#include "nilm/scenario.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace nilm;

namespace {

ErrorCode trace_error(const std::string& text, std::string* message = nullptr) {
    std::istringstream in(text);
    try {
        parse_trace(in, "t.csv");
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("three rows at 50 ms infer 20 Hz") {
    std::istringstream in("timestamp_s,power_w\n0.00,10\n0.05,12\n0.10,11\n");
    const SampleSeries s = parse_trace(in);
    CHECK(s.sampling_rate_hz() == 20.0);
    CHECK(s.size() == 3);
    CHECK(s.values()[1] == 12.0);
    CHECK(s.start_time_s() == 0.0);
}

TEST_CASE("header is optional") {
    std::istringstream in("5.0,1\n5.5,2\n6.0,3\n");
    const SampleSeries s = parse_trace(in);
    CHECK(s.sampling_rate_hz() == 2.0);
    CHECK(s.start_time_s() == 5.0);
}

TEST_CASE("malformed rows report the line number") {
    std::string msg;
    CHECK(trace_error("timestamp_s,power_w\n0.00,10\n0.05,abc\n", &msg) == ErrorCode::ParseError);
    CHECK(msg.find("t.csv:3") != std::string::npos);
    CHECK(trace_error("0,1\n0.05\n") == ErrorCode::ParseError);
    CHECK(trace_error("0,1,2\n0.05,1,2\n") == ErrorCode::ParseError);
}

TEST_CASE("gaps and jitter are rejected") {
    std::string msg;
    CHECK(trace_error("0.00,1\n0.05,1\n0.10,1\n0.20,1\n0.25,1\n", &msg) == ErrorCode::NonUniformSampling);
    CHECK(msg.find("t.csv:4") != std::string::npos);
    CHECK(trace_error("0.0,1\n0.0,1\n0.0,1\n") == ErrorCode::NonUniformSampling);
    // Half a percent of jitter is tolerated.
    CHECK(trace_error("0.0,1\n0.05,1\n0.10025,1\n0.15,1\n") == ErrorCode::IoError);
}

TEST_CASE("empty and single-sample files") {
    CHECK(trace_error("") == ErrorCode::EmptyFile);
    CHECK(trace_error("timestamp_s,power_w\n\n") == ErrorCode::EmptyFile);
    CHECK(trace_error("0,1\n") == ErrorCode::ParseError);
    CHECK(trace_error("0,nan\n0.05,1\n") == ErrorCode::NonFiniteValue);
}

TEST_CASE("trace round trip") {
    std::mt19937_64 rng(1);
    for (double rate : {20.0, 60.0, 1.0, 12000.0}) {
        const SampleSeries s(rate, testing_support::random_values(rng, 500, -5e3, 5e3), 123.25);
        std::stringstream buf;
        write_trace(buf, s);
        const SampleSeries back = parse_trace(buf);
        CHECK(std::abs(back.sampling_rate_hz() - rate) <= 1e-9 * rate);
        CHECK(back.start_time_s() == s.start_time_s());
        REQUIRE(back.size() == s.size());
        for (std::size_t j = 0; j < s.size(); ++j) CHECK(back.values()[j] == s.values()[j]);
    }
}

TEST_CASE("generated scenarios survive a save and reload") {
    const Scenario sc = generate_scenario(load_scenario(testing_support::fixture("kitchen.json")));
    std::stringstream buf;
    write_trace(buf, sc.series);
    const SampleSeries back = parse_trace(buf);
    CHECK(back.sampling_rate_hz() == 20.0);
    REQUIRE(back.size() == sc.series.size());
    for (std::size_t j = 0; j < back.size(); j += 97) CHECK(std::abs(back.time_of(j) - sc.series.time_of(j)) < 1e-9);
}

TEST_CASE("ground truth parsing") {
    std::istringstream in("timestamp_s,label\n19.25,Hair dryer on\n24.1,\"Range hood, high\"\n24.1,Lamp on\n");
    const GroundTruthLog log = parse_ground_truth(in);
    REQUIRE(log.size() == 3);
    CHECK(log[0].label == "Hair dryer on");
    CHECK(log[1].label == "Range hood, high");
    CHECK(log[1].timestamp_s == log[2].timestamp_s);

    std::istringstream empty("timestamp_s,label\n");
    CHECK(parse_ground_truth(empty).size() == 0);

    std::istringstream backwards("5,a\n4,b\n");
    CHECK_THROWS_AS(parse_ground_truth(backwards), Error);
    std::istringstream bad("timestamp_s,label\nnope,a\n");
    try {
        parse_ground_truth(bad, "g.csv");
        FAIL("accepted bad timestamp");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("g.csv:2") != std::string::npos);
    }
}

TEST_CASE("ground truth round trip") {
    const GroundTruthLog log({{1.5, "a on"}, {2.25, "b off"}, {2.25, "c on"}});
    std::stringstream buf;
    write_ground_truth(buf, log);
    const GroundTruthLog back = parse_ground_truth(buf);
    REQUIRE(back.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back[k].timestamp_s == log[k].timestamp_s);
        CHECK(back[k].label == log[k].label);
    }
}

TEST_CASE("event CSV round trip") {
    const std::vector<DetectedEvent> ev = {{12, 0.6, 150.25, EventStage::Final}, {400, 20.0, -149.5, EventStage::Final}};
    std::stringstream buf;
    write_events(buf, ev);
    CHECK(buf.str().substr(0, 28) == "index,timestamp_s,delta_watt");
    CHECK(buf.str().find("12,0.600000,150.250000") != std::string::npos);
    const auto back = parse_events(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[1].index == 400);
    CHECK(back[1].delta_watts == -149.5);
}

TEST_CASE("config parsing") {
    std::istringstream in("# tuned\npower_threshold_watts = 25\n  sg_window_samples=9 # narrower\n\n");
    const HybridConfig c = parse_config(in);
    CHECK(c.power_threshold_watts == 25.0);
    CHECK(c.sg_window_samples == 9);
    CHECK(c.time_limit_s == HybridConfig{}.time_limit_s);

    std::istringstream unknown("power_threshold = 25\n");
    try {
        parse_config(unknown, "c.cfg");
        FAIL("accepted unknown key");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("c.cfg:1") != std::string::npos);
    }
    std::istringstream bad_value("time_limit_s = fast\n");
    CHECK_THROWS_AS(parse_config(bad_value), Error);
    std::istringstream invalid("sg_window_samples = 8\n");
    try {
        parse_config(invalid);
        FAIL("accepted even window");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("config round trip covers every key") {
    HybridConfig c;
    c.power_threshold_watts = 30.5;
    c.sg_poly_order = 2;
    c.settle_threshold_s = 2.5;
    std::stringstream buf;
    write_config(buf, c);
    for (const auto& key : config_keys()) CHECK(buf.str().find(key + " = ") != std::string::npos);
    const HybridConfig back = parse_config(buf);
    CHECK(back.power_threshold_watts == 30.5);
    CHECK(back.sg_poly_order == 2);
    CHECK(back.settle_threshold_s == 2.5);
}

TEST_CASE("report lists every rate") {
    std::ostringstream out;
    write_report(out, metrics(117, 1, 4, 121));
    const std::string s = out.str();
    CHECK(s.find("tp=117") != std::string::npos);
    CHECK(s.find("fp=1\n") != std::string::npos);
    CHECK(s.find("e=121") != std::string::npos);
    CHECK(s.find("tpr=0.966942") != std::string::npos);
}

TEST_CASE("missing files are IoErrors") {
    try {
        load_trace("/nonexistent/trace.csv");
        FAIL("opened a missing file");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
        CHECK(std::string(e.what()).find("/nonexistent/trace.csv") != std::string::npos);
    }
}

}
