#pragma once

#include "nilm/scenario.hpp"

#include <random>
#include <string>

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(NILM_FIXTURE_DIR) + "/" + name; }

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -100.0,
                                         double hi = 100.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Random but valid scenario: a handful of appliances with arbitrary
// transients, optional modes and fluctuation.
inline nilm::ScenarioSpec random_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    nilm::ScenarioSpec spec;
    spec.sampling_rate_hz = u(rng) < 0.8 ? 20.0 : 60.0;
    spec.duration_s = uniform(30.0, 240.0);
    spec.noise_std_watts = uniform(0.0, 5.0);
    spec.seed = rng();
    const int count = static_cast<int>(uniform(0.0, 6.99));
    const nilm::TransientKind kinds[] = {nilm::TransientKind::Step, nilm::TransientKind::SpikeDecay,
                                         nilm::TransientKind::Ramp, nilm::TransientKind::MultiStage};
    for (int a = 0; a < count; ++a) {
        nilm::ApplianceSpec ap;
        ap.label = "appliance " + std::to_string(a);
        ap.power_watts = uniform(10.0, 2000.0);
        ap.on_time_s = uniform(1.0, spec.duration_s * 0.7);
        ap.off_time_s = uniform(ap.on_time_s + 1.0, spec.duration_s);
        ap.transient = kinds[static_cast<int>(uniform(0.0, 3.99))];
        ap.transient_duration_s = uniform(0.0, 4.0);
        if (u(rng) < 0.3) ap.fluctuation_amplitude_watts = uniform(5.0, 80.0);
        if (u(rng) < 0.3 && ap.off_time_s - ap.on_time_s > 4.0) {
            nilm::ModeChange m;
            m.time_s = uniform(ap.on_time_s + 1.0, ap.off_time_s - 1.0);
            m.power_watts = uniform(10.0, 2000.0);
            m.transient = kinds[static_cast<int>(uniform(0.0, 3.99))];
            m.transient_duration_s = uniform(0.0, 3.0);
            ap.modes.push_back(m);
        }
        spec.appliances.push_back(ap);
    }
    return spec;
}

}  // namespace testing_support
