#include "nilm/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace nilm {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_size(std::string_view s, std::size_t& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string shortest(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

std::string fixed(double v, int decimals) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, v);
    return buf.data();
}

Error parse_error(const std::string& source, std::size_t line, const std::string& what) {
    return Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

// Splits at the first comma.
bool split2(std::string_view line, std::string_view& a, std::string_view& b) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) return false;
    a = line.substr(0, comma);
    b = line.substr(comma + 1);
    return true;
}

}  // namespace

SampleSeries parse_trace(std::istream& in, const std::string& source) {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::size_t> lines;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        std::string_view a, b;
        double t = 0.0, p = 0.0;
        const bool split = split2(line, a, b);
        if (!seen_content) {
            seen_content = true;
            if (split && !parse_double(a, t)) continue;  // header
        }
        if (!split) throw parse_error(source, line_no, "expected two comma-separated fields");
        if (b.find(',') != std::string_view::npos)
            throw parse_error(source, line_no, "expected two comma-separated fields");
        if (!parse_double(a, t)) throw parse_error(source, line_no, "bad timestamp '" + std::string(a) + "'");
        if (!parse_double(b, p)) throw parse_error(source, line_no, "bad power value '" + std::string(trim(b)) + "'");
        times.push_back(t);
        values.push_back(p);
        lines.push_back(line_no);
    }
    if (times.empty()) throw Error(ErrorCode::EmptyFile, source + ": no samples");
    if (times.size() < 2)
        throw Error(ErrorCode::ParseError, source + ": at least two samples are needed to infer the sampling rate");

    std::vector<double> steps(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) steps[i - 1] = times[i] - times[i - 1];
    std::vector<double> sorted = steps;
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double median = *mid;
    if (!(median > 0.0))
        throw Error(ErrorCode::NonUniformSampling, source + ": timestamps are not increasing");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (std::abs(steps[i] - median) > 0.01 * median)
            throw Error(ErrorCode::NonUniformSampling,
                        source + ":" + std::to_string(lines[i + 1]) + ": step " + shortest(steps[i]) +
                            " s deviates more than 1% from the median step " + shortest(median) + " s");
    }
    // Timestamps printed with finite precision perturb the median step; snap
    // the rate to a micro-hertz grid when that is within rounding noise.
    double rate = 1.0 / median;
    const double snapped = std::round(rate * 1e6) / 1e6;
    if (std::abs(snapped - rate) <= 1e-9 * rate) rate = snapped;
    SampleSeries series(rate, std::move(values), times.front());
    validate_series(series);
    return series;
}

SampleSeries load_trace(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_trace(in, path.string());
}

void write_trace(std::ostream& out, const SampleSeries& series) {
    out << "timestamp_s,power_w\n";
    const auto v = series.values();
    std::string line;
    for (std::size_t j = 0; j < v.size(); ++j) {
        line = shortest(series.time_of(j));
        line += ',';
        line += shortest(v[j]);
        line += '\n';
        out << line;
    }
}

void save_trace(const std::filesystem::path& path, const SampleSeries& series) {
    auto out = open_out(path);
    write_trace(out, series);
}

GroundTruthLog parse_ground_truth(std::istream& in, const std::string& source) {
    std::vector<GroundTruthEntry> entries;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        std::string_view a, b;
        double t = 0.0;
        const bool split = split2(line, a, b);
        if (!seen_content) {
            seen_content = true;
            if (split && !parse_double(a, t)) continue;
        }
        if (!split) throw parse_error(source, line_no, "expected `timestamp_s,label`");
        if (!parse_double(a, t) || !std::isfinite(t))
            throw parse_error(source, line_no, "bad timestamp '" + std::string(a) + "'");
        std::string_view label = trim(b);
        if (label.size() >= 2 && label.front() == '"' && label.back() == '"')
            label = label.substr(1, label.size() - 2);
        if (!entries.empty() && t < entries.back().timestamp_s)
            throw Error(ErrorCode::UnsortedInput,
                        source + ":" + std::to_string(line_no) + ": timestamp goes backwards");
        entries.push_back({t, std::string(label)});
    }
    return GroundTruthLog(std::move(entries));
}

GroundTruthLog load_ground_truth(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_ground_truth(in, path.string());
}

void write_ground_truth(std::ostream& out, const GroundTruthLog& log) {
    out << "timestamp_s,label\n";
    for (const auto& e : log.entries()) out << shortest(e.timestamp_s) << ',' << e.label << '\n';
}

void save_ground_truth(const std::filesystem::path& path, const GroundTruthLog& log) {
    auto out = open_out(path);
    write_ground_truth(out, log);
}

void write_events(std::ostream& out, std::span<const DetectedEvent> events) {
    out << "index,timestamp_s,delta_watts\n";
    for (const auto& e : events)
        out << e.index << ',' << fixed(e.timestamp_s, 6) << ',' << fixed(e.delta_watts, 6) << '\n';
}

std::vector<DetectedEvent> parse_events(std::istream& in, const std::string& source) {
    std::vector<DetectedEvent> events;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || (line_no == 1 && line.starts_with("index"))) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos)
            throw parse_error(source, line_no, "expected `index,timestamp_s,delta_watts`");
        DetectedEvent e;
        e.stage = EventStage::Final;
        if (!parse_size(line.substr(0, c1), e.index) ||
            !parse_double(line.substr(c1 + 1, c2 - c1 - 1), e.timestamp_s) ||
            !parse_double(line.substr(c2 + 1), e.delta_watts))
            throw parse_error(source, line_no, "malformed event row");
        events.push_back(e);
    }
    return events;
}

void write_values(std::ostream& out, const SampleSeries& series, std::span<const double> values,
                  const std::string& column) {
    out << "timestamp_s," << column << '\n';
    for (std::size_t j = 0; j < values.size(); ++j)
        out << shortest(series.time_of(j)) << ',' << shortest(values[j]) << '\n';
}

void write_extrema(std::ostream& out, const SampleSeries& series, std::span<const Extremum> extrema) {
    out << "index,timestamp_s,kind,value\n";
    for (const auto& e : extrema)
        out << e.index << ',' << fixed(series.time_of(e.index), 6) << ','
            << (e.kind == ExtremumKind::Peak ? "peak" : "valley") << ',' << shortest(e.value) << '\n';
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "mean_window_s",       "power_threshold_watts", "time_limit_s",
        "derivative_epsilon",  "settle_threshold_s",    "loess_window_s",
        "settle_window_s",     "sg_window_samples",     "sg_poly_order",
        "fluctuation_trigger_watts", "eval_match_tolerance_s"};
    return keys;
}

namespace {

double* double_field(HybridConfig& c, std::string_view key) {
    if (key == "mean_window_s") return &c.mean_window_s;
    if (key == "power_threshold_watts") return &c.power_threshold_watts;
    if (key == "time_limit_s") return &c.time_limit_s;
    if (key == "derivative_epsilon") return &c.derivative_epsilon;
    if (key == "settle_threshold_s") return &c.settle_threshold_s;
    if (key == "loess_window_s") return &c.loess_window_s;
    if (key == "settle_window_s") return &c.settle_window_s;
    if (key == "fluctuation_trigger_watts") return &c.fluctuation_trigger_watts;
    if (key == "eval_match_tolerance_s") return &c.eval_match_tolerance_s;
    return nullptr;
}

std::size_t* size_field(HybridConfig& c, std::string_view key) {
    if (key == "sg_window_samples") return &c.sg_window_samples;
    if (key == "sg_poly_order") return &c.sg_poly_order;
    return nullptr;
}

}  // namespace

void apply_config_value(HybridConfig& config, const std::string& key, const std::string& value) {
    if (double* d = double_field(config, key)) {
        if (!parse_double(value, *d))
            throw Error(ErrorCode::ParseError, "bad value '" + value + "' for " + key);
        return;
    }
    if (std::size_t* s = size_field(config, key)) {
        if (!parse_size(value, *s))
            throw Error(ErrorCode::ParseError, "bad integer '" + value + "' for " + key);
        return;
    }
    throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
}

HybridConfig parse_config(std::istream& in, const std::string& source, HybridConfig base) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw parse_error(source, line_no, "expected `key = value`");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        try {
            apply_config_value(base, key, value);
        } catch (const Error& e) {
            throw parse_error(source, line_no, e.what());
        }
    }
    base.validate();
    return base;
}

HybridConfig load_config(const std::filesystem::path& path, HybridConfig base) {
    auto in = open_in(path);
    return parse_config(in, path.string(), base);
}

void write_config(std::ostream& out, const HybridConfig& c) {
    out << "mean_window_s = " << shortest(c.mean_window_s) << '\n'
        << "power_threshold_watts = " << shortest(c.power_threshold_watts) << '\n'
        << "time_limit_s = " << shortest(c.time_limit_s) << '\n'
        << "derivative_epsilon = " << shortest(c.derivative_epsilon) << '\n'
        << "settle_threshold_s = " << shortest(c.settle_threshold_s) << '\n'
        << "loess_window_s = " << shortest(c.loess_window_s) << '\n'
        << "settle_window_s = " << shortest(c.settle_window_s) << '\n'
        << "sg_window_samples = " << c.sg_window_samples << '\n'
        << "sg_poly_order = " << c.sg_poly_order << '\n'
        << "fluctuation_trigger_watts = " << shortest(c.fluctuation_trigger_watts) << '\n'
        << "eval_match_tolerance_s = " << shortest(c.eval_match_tolerance_s) << '\n';
}

void write_report(std::ostream& out, const EvaluationReport& r) {
    auto pct = [](double v) { return fixed(100.0 * v, 2) + "%"; };
    out << "metric  value\n"
        << "E       " << r.ground_truth_count << '\n'
        << "TP      " << r.tp << '\n'
        << "FP      " << r.fp << '\n'
        << "FN      " << r.fn << '\n'
        << "TPR     " << pct(r.tpr) << '\n'
        << "FPR     " << pct(r.fpr) << '\n'
        << "FNR     " << pct(r.fnr) << '\n'
        << '\n'
        << "e=" << r.ground_truth_count << '\n'
        << "tp=" << r.tp << '\n'
        << "fp=" << r.fp << '\n'
        << "fn=" << r.fn << '\n'
        << "tpr=" << fixed(r.tpr, 6) << '\n'
        << "fpr=" << fixed(r.fpr, 6) << '\n'
        << "fnr=" << fixed(r.fnr, 6) << '\n';
}

}  // namespace nilm
