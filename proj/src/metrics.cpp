#include "gf/metrics.hpp"

#include <cmath>

#include "gf/error.hpp"

namespace gf {

void validate(const ExertionModelParams& p) {
    if (!(p.rest_hr > 0 && p.hr_time_constant > 0 && p.intensity_window > 0 && p.intensity_scale > 0 &&
          p.kcal_per_energy_unit > 0)) {
        throw Error("invalid-argument", "exertion model parameters must all be positive");
    }
}

double max_heart_rate(double age) {
    if (!(age > 0.0)) throw Error("nonpositive-age", "age must be positive, got " + std::to_string(age));
    return 211.0 - 0.64 * age;
}

namespace {

struct EnergyEvent {
    std::int64_t time_ms;
    double cost;
};

std::vector<EnergyEvent> executed_energy(const SessionLog& log) {
    std::vector<EnergyEvent> out;
    for (const auto& e : log.events) {
        if (const auto* g = e.as<ev::GestureSubmitted>(); g && g->executed) {
            out.push_back({e.time_ms, log.header.config.energy_cost(g->gesture)});
        }
    }
    return out;
}

} // namespace

ExertionResult simulate_exertion(const SessionLog& log, const AgentProfile& profile, const ExertionModelParams& p) {
    validate(p);
    const double max_hr = max_heart_rate(profile.age);
    const auto energy = executed_energy(log);

    ExertionResult r;
    for (const auto& e : energy) r.calories_proxy += p.kcal_per_energy_unit * e.cost;

    const std::int64_t dt_ms = log.header.config.tick_ms();
    const std::int64_t end_ms = log.events.empty() ? 0 : log.events.back().time_ms;
    const std::int64_t steps = end_ms / dt_ms;
    if (steps == 0) {
        r.avg_hr_pct = p.rest_hr / max_hr * 100.0;
        return r;
    }

    const double dt = static_cast<double>(dt_ms) / 1000.0;
    const double alpha = 1.0 - std::exp(-dt / p.hr_time_constant);
    const std::int64_t window_ms = std::llround(p.intensity_window * 1000.0);
    double hr = p.rest_hr;
    double hr_sum = 0.0;
    double window_energy = 0.0;
    std::size_t head = 0;  // next energy event to enter the window
    std::size_t tail = 0;  // oldest event still inside the window
    for (std::int64_t k = 1; k <= steps; ++k) {
        const std::int64_t t = k * dt_ms;
        while (head < energy.size() && energy[head].time_ms <= t) window_energy += energy[head++].cost;
        while (tail < head && energy[tail].time_ms <= t - window_ms) window_energy -= energy[tail++].cost;
        const double rate = std::max(0.0, window_energy) / p.intensity_window;
        const double fraction = std::min(1.0, rate * p.intensity_scale);
        const double target = p.rest_hr + fraction * (max_hr - p.rest_hr);
        hr += alpha * (target - hr);
        hr_sum += hr;
    }
    r.avg_hr_pct = hr_sum / static_cast<double>(steps) / max_hr * 100.0;
    return r;
}

Metrics compute_metrics(const SessionLog& log, const AgentProfile& profile, const ExertionModelParams& params) {
    check_log_well_formed(log);
    Metrics m;
    const GameConfig& cfg = log.header.config;

    bool in_training = log.header.start == StartMode::WithTraining;
    std::int64_t life_start = in_training ? -1 : 0;  // -1: no monster life in progress
    std::size_t lives_taken = 0;

    std::array<std::int64_t, kGestureCount> executed{};
    std::int64_t activations = 0;
    std::int64_t blocked_activations = 0;
    bool open_activation_counted = false;

    for (const auto& e : log.events) {
        if (const auto* g = e.as<ev::GestureSubmitted>()) {
            if (g->executed) m.total_energy += cfg.energy_cost(g->gesture);
            if (!in_training) {
                ++m.gesture_count[index(g->gesture)];
                if (g->executed) ++executed[index(g->gesture)];
            }
        } else if (e.as<ev::ShieldActivated>()) {
            open_activation_counted = !in_training;
            if (open_activation_counted) ++activations;
        } else if (const auto* x = e.as<ev::ShieldExpired>()) {
            if (open_activation_counted && x->blocked_any) ++blocked_activations;
            open_activation_counted = false;
        } else if (const auto* pc = e.as<ev::PhaseChanged>()) {
            const bool from_training = std::holds_alternative<TrainingPhase>(pc->from);
            const bool from_wait = std::holds_alternative<InterLifeWaitPhase>(pc->from);
            in_training = std::holds_alternative<TrainingPhase>(pc->to);
            if (std::holds_alternative<GameplayPhase>(pc->to) && (from_training || from_wait)) life_start = e.time_ms;
        } else if (const auto* l = e.as<ev::LifeLost>()) {
            if (l->actor == Actor::Monster) {
                if (life_start < 0 || lives_taken >= m.completion_time_per_life.size()) {
                    throw Error("malformed-log", "monster life lost without a matching life start");
                }
                m.completion_time_per_life[lives_taken++] = static_cast<double>(e.time_ms - life_start) / 1000.0;
                life_start = -1;
            }
        } else if (const auto* s = e.as<ev::SessionEnded>()) {
            m.winner = s->winner;
        }
    }

    for (Gesture g : {Gesture::Kick, Gesture::Punch, Gesture::ZoomKick}) {
        const auto submitted = m.gesture_count[index(g)];
        if (submitted > 0) m.success_rate[index(g)] = static_cast<double>(executed[index(g)]) / static_cast<double>(submitted);
    }
    if (activations > 0) {
        m.success_rate[index(Gesture::ZoomSquat)] = static_cast<double>(blocked_activations) / static_cast<double>(activations);
    }

    m.session_duration = log.events.empty() ? 0.0 : log.events.back().time();
    const auto ex = simulate_exertion(log, profile, params);
    m.calories_proxy = ex.calories_proxy;
    m.avg_hr_pct = ex.avg_hr_pct;
    return m;
}

Json to_json(const Metrics& m) {
    Json j;
    Json lives = Json::array();
    for (const auto& t : m.completion_time_per_life) lives.push_back(t ? Json(*t) : Json(nullptr));
    j["completion_time_per_life"] = std::move(lives);
    Json rates = Json::object();
    for (Gesture g : kAllGestures) {
        if (const auto& r = m.success_rate[index(g)]) rates[std::string(to_string(g))] = *r;
    }
    j["success_rate"] = std::move(rates);
    Json counts = Json::object();
    for (Gesture g : kAllGestures) counts[std::string(to_string(g))] = m.gesture_count[index(g)];
    j["gesture_count"] = std::move(counts);
    j["total_energy"] = m.total_energy;
    j["calories_proxy"] = m.calories_proxy;
    j["avg_hr_pct"] = m.avg_hr_pct;
    j["session_duration"] = m.session_duration;
    j["winner"] = m.winner ? Json(to_string(*m.winner)) : Json(nullptr);
    return j;
}

Metrics metrics_from_json(const Json& j) {
    Metrics m;
    const auto& lives = j.at("completion_time_per_life");
    for (std::size_t i = 0; i < m.completion_time_per_life.size() && i < lives.size(); ++i) {
        if (!lives[i].is_null()) m.completion_time_per_life[i] = lives[i].get<double>();
    }
    for (const auto& [k, v] : j.at("success_rate").items()) m.success_rate[index(parse_gesture(k))] = v.get<double>();
    for (const auto& [k, v] : j.at("gesture_count").items()) m.gesture_count[index(parse_gesture(k))] = v.get<std::int64_t>();
    m.total_energy = j.at("total_energy").get<double>();
    m.calories_proxy = j.at("calories_proxy").get<double>();
    m.avg_hr_pct = j.at("avg_hr_pct").get<double>();
    m.session_duration = j.at("session_duration").get<double>();
    if (!j.at("winner").is_null()) m.winner = parse_actor(j.at("winner").get<std::string>());
    return m;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, _] : flatten(Metrics{})) n.push_back(name);
        return n;
    }();
    return names;
}

std::vector<std::pair<std::string, std::optional<double>>> flatten(const Metrics& m) {
    std::vector<std::pair<std::string, std::optional<double>>> out;
    for (std::size_t i = 0; i < m.completion_time_per_life.size(); ++i) {
        out.emplace_back("completion_time_life" + std::to_string(i + 1), m.completion_time_per_life[i]);
    }
    for (Gesture g : {Gesture::Kick, Gesture::Punch, Gesture::ZoomKick, Gesture::ZoomSquat}) {
        out.emplace_back("success_rate_" + std::string(to_string(g)), m.success_rate[index(g)]);
    }
    for (Gesture g : kAllGestures) {
        out.emplace_back("gesture_count_" + std::string(to_string(g)), static_cast<double>(m.gesture_count[index(g)]));
    }
    out.emplace_back("gesture_count_attack_total", static_cast<double>(m.attack_gesture_total()));
    out.emplace_back("total_energy", m.total_energy);
    out.emplace_back("calories_proxy_au", m.calories_proxy);
    out.emplace_back("avg_hr_pct", m.avg_hr_pct);
    out.emplace_back("session_duration", m.session_duration);
    out.emplace_back("player_won", m.winner ? std::optional<double>(*m.winner == Actor::Player ? 1.0 : 0.0) : std::nullopt);
    return out;
}

} // namespace gf
