#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gf/agents.hpp"
#include "gf/session.hpp"

namespace gf {

struct ExertionModelParams {
    double rest_hr = 70.0;            // bpm
    double hr_time_constant = 30.0;   // seconds
    double intensity_window = 30.0;   // seconds
    double intensity_scale = 0.8;     // fraction of HR reserve per (energy unit / second)
    double kcal_per_energy_unit = 0.5;
    bool operator==(const ExertionModelParams&) const = default;
};

void validate(const ExertionModelParams& params);  // "invalid-argument"

struct ExertionResult {
    double avg_hr_pct = 0.0;
    double calories_proxy = 0.0;  // arbitrary units, not physiological kcal
};

struct Metrics {
    // Monster lives in order; absent when that life was never taken.
    std::array<std::optional<double>, 3> completion_time_per_life{};
    // Attack gestures: executed / submitted. ZoomSquat: activations that blocked / activations.
    // Zoom has no success notion and stays absent.
    std::array<std::optional<double>, kGestureCount> success_rate{};
    std::array<std::int64_t, kGestureCount> gesture_count{};
    double total_energy = 0.0;
    double calories_proxy = 0.0;
    double avg_hr_pct = 0.0;
    double session_duration = 0.0;
    std::optional<Actor> winner;

    std::int64_t attack_gesture_total() const noexcept {
        return gesture_count[index(Gesture::Kick)] + gesture_count[index(Gesture::Punch)] +
               gesture_count[index(Gesture::ZoomKick)];
    }
    bool operator==(const Metrics&) const = default;
};

Json to_json(const Metrics& m);
Metrics metrics_from_json(const Json& j);

// 211 - 0.64 * age. Throws "nonpositive-age".
double max_heart_rate(double age);

ExertionResult simulate_exertion(const SessionLog& log, const AgentProfile& profile,
                                 const ExertionModelParams& params = {});

// Counts and success rates cover the gameplay portion (training excluded);
// energy covers every executed gesture. Throws "malformed-log".
Metrics compute_metrics(const SessionLog& log, const AgentProfile& profile, const ExertionModelParams& params = {});

// Flat (name, value) view used by summaries and exports; absent values stay absent.
std::vector<std::pair<std::string, std::optional<double>>> flatten(const Metrics& m);
const std::vector<std::string>& metric_names();

} // namespace gf
