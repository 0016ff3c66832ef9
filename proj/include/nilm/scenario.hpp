#pragma once

#include "nilm/core.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nilm {

// Step: instant. SpikeDecay: overshoot by half the change, decaying with a
// time constant of duration / 5. Ramp: linear over the duration.
// MultiStage: half the change at once, a plateau for a quarter of the
// duration, then a linear rise to the target.
enum class TransientKind { Step, SpikeDecay, Ramp, MultiStage };

std::string_view to_string(TransientKind kind) noexcept;
TransientKind transient_from_string(std::string_view name);

struct ModeChange {
    double time_s = 0.0;
    double power_watts = 0.0;
    TransientKind transient = TransientKind::Step;
    double transient_duration_s = 0.0;
    std::string label;
};

struct ApplianceSpec {
    std::string label;
    double power_watts = 0.0;
    double on_time_s = 0.0;
    double off_time_s = 0.0;
    TransientKind transient = TransientKind::Step;
    double transient_duration_s = 0.0;
    // Fluctuation arrives in bursts of kBurstSeconds with exponentially
    // distributed start times, each a sin^2-enveloped sine.
    double fluctuation_amplitude_watts = 0.0;
    double fluctuation_frequency_hz = 2.0;
    double fluctuation_interval_s = 25.0;
    std::vector<ModeChange> modes;
};

struct ScenarioSpec {
    double sampling_rate_hz = 20.0;
    double duration_s = 0.0;
    std::vector<ApplianceSpec> appliances;
    double noise_std_watts = 0.0;
    std::uint64_t seed = 0;
};

struct Scenario {
    SampleSeries series;
    GroundTruthLog truth;
};

inline constexpr double kBurstSeconds = 2.0;
// Bursts keep this distance from every transition in the scenario.
inline constexpr double kBurstGuardSeconds = 3.0;

void validate_spec(const ScenarioSpec& spec);

Scenario generate_scenario(const ScenarioSpec& spec);

ScenarioSpec parse_scenario(std::string_view json_text, const std::string& source = "<string>");
ScenarioSpec load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace nilm
