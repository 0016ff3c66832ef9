#include "nilm/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace nilm {

using nlohmann::json;

std::string_view to_string(TransientKind kind) noexcept {
    switch (kind) {
        case TransientKind::Step: return "Step";
        case TransientKind::SpikeDecay: return "SpikeDecay";
        case TransientKind::Ramp: return "Ramp";
        case TransientKind::MultiStage: return "MultiStage";
    }
    return "Step";
}

TransientKind transient_from_string(std::string_view name) {
    if (name == "Step") return TransientKind::Step;
    if (name == "SpikeDecay") return TransientKind::SpikeDecay;
    if (name == "Ramp") return TransientKind::Ramp;
    if (name == "MultiStage") return TransientKind::MultiStage;
    throw Error(ErrorCode::InvalidSpec, "unknown transient kind '" + std::string(name) + "'");
}

namespace {

void spec_check(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

struct Change {
    double time_s;
    double power;
    TransientKind kind;
    double duration;
};

// Level of one appliance dt seconds into a transition from `from` to `to`.
double transition_level(const Change& c, double from, double dt) {
    const double to = c.power;
    const double delta = to - from;
    if (c.kind == TransientKind::Step || c.duration <= 0.0) return to;
    switch (c.kind) {
        case TransientKind::SpikeDecay:
            return to + 0.5 * delta * std::exp(-dt / (c.duration / 5.0));
        case TransientKind::Ramp:
            return from + delta * std::min(1.0, dt / c.duration);
        case TransientKind::MultiStage: {
            const double hold = c.duration / 4.0;
            if (dt < hold) return from + 0.5 * delta;
            if (dt < c.duration) return from + 0.5 * delta + 0.5 * delta * (dt - hold) / (c.duration - hold);
            return to;
        }
        case TransientKind::Step: break;
    }
    return to;
}

std::size_t first_sample_at(double t, double rate) {
    const double j = std::ceil(t * rate - 1e-9);
    return j <= 0.0 ? 0 : static_cast<std::size_t>(j);
}

}  // namespace

void validate_spec(const ScenarioSpec& s) {
    spec_check(std::isfinite(s.sampling_rate_hz) && s.sampling_rate_hz > 0.0,
               "sampling_rate_hz must be positive");
    spec_check(std::isfinite(s.duration_s) && s.duration_s > 0.0, "duration_s must be positive");
    spec_check(finite_nonneg(s.noise_std_watts), "noise_std_watts must be >= 0");
    spec_check(std::round(s.duration_s * s.sampling_rate_hz) >= 1.0, "duration holds no samples");
    for (const auto& a : s.appliances) {
        const std::string who = "appliance '" + a.label + "': ";
        spec_check(std::isfinite(a.power_watts), who + "power_watts must be finite");
        spec_check(finite_nonneg(a.on_time_s), who + "on_time_s must be >= 0");
        spec_check(std::isfinite(a.off_time_s) && a.on_time_s < a.off_time_s && a.off_time_s <= s.duration_s,
                   who + "requires on_time_s < off_time_s <= duration_s");
        spec_check(finite_nonneg(a.transient_duration_s), who + "transient_duration_s must be >= 0");
        spec_check(finite_nonneg(a.fluctuation_amplitude_watts),
                   who + "fluctuation_amplitude_watts must be >= 0");
        spec_check(std::isfinite(a.fluctuation_frequency_hz) && a.fluctuation_frequency_hz > 0.0,
                   who + "fluctuation_frequency_hz must be positive");
        spec_check(std::isfinite(a.fluctuation_interval_s) && a.fluctuation_interval_s > 0.0,
                   who + "fluctuation_interval_s must be positive");
        double prev = a.on_time_s;
        for (const auto& m : a.modes) {
            spec_check(std::isfinite(m.time_s) && m.time_s > prev && m.time_s < a.off_time_s,
                       who + "mode times must increase strictly inside (on_time_s, off_time_s)");
            spec_check(std::isfinite(m.power_watts), who + "mode power must be finite");
            spec_check(finite_nonneg(m.transient_duration_s), who + "mode transient_duration_s must be >= 0");
            prev = m.time_s;
        }
    }
}

Scenario generate_scenario(const ScenarioSpec& spec) {
    validate_spec(spec);
    const double fs = spec.sampling_rate_hz;
    const auto N = static_cast<std::size_t>(std::round(spec.duration_s * fs));
    std::vector<double> x(N, 0.0);
    std::vector<GroundTruthEntry> truth;
    std::mt19937_64 rng(spec.seed);

    for (const auto& a : spec.appliances) {
        std::vector<Change> changes;
        std::vector<std::string> labels;
        changes.push_back({a.on_time_s, a.power_watts, a.transient, a.transient_duration_s});
        labels.push_back(a.label + " on");
        for (const auto& m : a.modes) {
            changes.push_back({m.time_s, m.power_watts, m.transient, m.transient_duration_s});
            labels.push_back(m.label.empty() ? a.label + " mode" : m.label);
        }
        changes.push_back({a.off_time_s, 0.0, TransientKind::Step, 0.0});
        labels.push_back(a.label + " off");

        double from = 0.0;
        for (std::size_t k = 0; k < changes.size(); ++k) {
            const Change& c = changes[k];
            const std::size_t lo = first_sample_at(c.time_s, fs);
            const std::size_t hi = k + 1 < changes.size() ? first_sample_at(changes[k + 1].time_s, fs) : N;
            for (std::size_t j = lo; j < std::min(hi, N); ++j)
                x[j] += transition_level(c, from, static_cast<double>(j) / fs - c.time_s);
            if (lo < N) truth.push_back({c.time_s, labels[k]});
            from = c.power;
        }
    }

    // Fluctuation bursts stay clear of every transition in the scenario.
    std::vector<double> transitions;
    for (const auto& e : truth) transitions.push_back(e.timestamp_s);
    for (const auto& a : spec.appliances) {
        if (a.fluctuation_amplitude_watts <= 0.0) continue;
        std::exponential_distribution<double> gap(1.0 / a.fluctuation_interval_s);
        const double w = 2.0 * std::numbers::pi * a.fluctuation_frequency_hz;
        double start = a.on_time_s + kBurstGuardSeconds;
        while (true) {
            start += gap(rng);
            const double end = start + kBurstSeconds;
            if (end > a.off_time_s - kBurstGuardSeconds) break;
            const bool near_event = std::any_of(transitions.begin(), transitions.end(), [&](double t) {
                return start - kBurstGuardSeconds < t && t < end + kBurstGuardSeconds;
            });
            if (near_event) continue;
            const std::size_t lo = first_sample_at(start, fs);
            const std::size_t hi = std::min(first_sample_at(end, fs), N);
            for (std::size_t j = lo; j < hi; ++j) {
                const double t = static_cast<double>(j) / fs;
                const double s = std::sin(std::numbers::pi * (t - start) / kBurstSeconds);
                x[j] += a.fluctuation_amplitude_watts * s * s * std::sin(w * (t - start));
            }
        }
    }

    if (spec.noise_std_watts > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_std_watts);
        for (double& v : x) v += noise(rng);
    }

    std::stable_sort(truth.begin(), truth.end(),
                     [](const auto& l, const auto& r) { return l.timestamp_s < r.timestamp_s; });
    return Scenario{SampleSeries(fs, std::move(x)), GroundTruthLog(std::move(truth))};
}

namespace {

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw Error(ErrorCode::InvalidSpec, where + ": missing '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, where + ": bad '" + key + "': " + e.what());
    }
}

template <typename T>
T optional(const json& j, const char* key, T fallback, const std::string& where) {
    return j.contains(key) ? required<T>(j, key, where) : fallback;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) throw Error(ErrorCode::InvalidSpec, where + ": unknown key '" + key + "'");
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view text, const std::string& source) {
    json root;
    try {
        root = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, source + ": " + e.what());
    }
    if (!root.is_object()) throw Error(ErrorCode::InvalidSpec, source + ": top level must be an object");
    reject_unknown(root, {"description", "sampling_rate_hz", "duration_s", "noise_std_watts", "seed", "appliances"},
                   source);

    ScenarioSpec spec;
    spec.sampling_rate_hz = required<double>(root, "sampling_rate_hz", source);
    spec.duration_s = required<double>(root, "duration_s", source);
    spec.noise_std_watts = optional<double>(root, "noise_std_watts", 0.0, source);
    spec.seed = optional<std::uint64_t>(root, "seed", 0, source);
    const json apps = root.value("appliances", json::array());
    if (!apps.is_array()) throw Error(ErrorCode::InvalidSpec, source + ": 'appliances' must be an array");
    for (std::size_t i = 0; i < apps.size(); ++i) {
        const json& a = apps[i];
        const std::string where = source + ": appliances[" + std::to_string(i) + "]";
        if (!a.is_object()) throw Error(ErrorCode::InvalidSpec, where + ": must be an object");
        reject_unknown(a,
                       {"label", "power_watts", "on_time_s", "off_time_s", "transient", "transient_duration_s",
                        "fluctuation_amplitude_watts", "fluctuation_frequency_hz", "fluctuation_interval_s",
                        "modes"},
                       where);
        ApplianceSpec ap;
        ap.label = optional<std::string>(a, "label", "appliance " + std::to_string(i), where);
        ap.power_watts = required<double>(a, "power_watts", where);
        ap.on_time_s = required<double>(a, "on_time_s", where);
        ap.off_time_s = required<double>(a, "off_time_s", where);
        ap.transient = transient_from_string(optional<std::string>(a, "transient", "Step", where));
        ap.transient_duration_s = optional<double>(a, "transient_duration_s", 0.0, where);
        ap.fluctuation_amplitude_watts = optional<double>(a, "fluctuation_amplitude_watts", 0.0, where);
        ap.fluctuation_frequency_hz = optional<double>(a, "fluctuation_frequency_hz", 2.0, where);
        ap.fluctuation_interval_s = optional<double>(a, "fluctuation_interval_s", 25.0, where);
        const json modes = a.value("modes", json::array());
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const json& m = modes[k];
            const std::string mw = where + ".modes[" + std::to_string(k) + "]";
            reject_unknown(m, {"time_s", "power_watts", "transient", "transient_duration_s", "label"}, mw);
            ModeChange mc;
            mc.time_s = required<double>(m, "time_s", mw);
            mc.power_watts = required<double>(m, "power_watts", mw);
            mc.transient = transient_from_string(optional<std::string>(m, "transient", "Step", mw));
            mc.transient_duration_s = optional<double>(m, "transient_duration_s", 0.0, mw);
            mc.label = optional<std::string>(m, "label", "", mw);
            ap.modes.push_back(std::move(mc));
        }
        spec.appliances.push_back(std::move(ap));
    }
    validate_spec(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string scenario_to_json(const ScenarioSpec& spec) {
    json root;
    root["sampling_rate_hz"] = spec.sampling_rate_hz;
    root["duration_s"] = spec.duration_s;
    root["noise_std_watts"] = spec.noise_std_watts;
    root["seed"] = spec.seed;
    root["appliances"] = json::array();
    for (const auto& a : spec.appliances) {
        json j{{"label", a.label},
               {"power_watts", a.power_watts},
               {"on_time_s", a.on_time_s},
               {"off_time_s", a.off_time_s},
               {"transient", std::string(to_string(a.transient))},
               {"transient_duration_s", a.transient_duration_s},
               {"fluctuation_amplitude_watts", a.fluctuation_amplitude_watts},
               {"fluctuation_frequency_hz", a.fluctuation_frequency_hz},
               {"fluctuation_interval_s", a.fluctuation_interval_s},
               {"modes", json::array()}};
        for (const auto& m : a.modes)
            j["modes"].push_back({{"time_s", m.time_s},
                                  {"power_watts", m.power_watts},
                                  {"transient", std::string(to_string(m.transient))},
                                  {"transient_duration_s", m.transient_duration_s},
                                  {"label", m.label}});
        root["appliances"].push_back(std::move(j));
    }
    return root.dump(2);
}

}  // namespace nilm
