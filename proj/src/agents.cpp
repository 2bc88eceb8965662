#include "gf/agents.hpp"

#include <algorithm>
#include <cmath>

#include "gf/error.hpp"

namespace gf {

namespace {

std::int64_t seconds_to_ms_ceil(double s) { return static_cast<std::int64_t>(std::ceil(s * 1000.0 - 1e-9)); }

AgentProfile make_profile(std::string name, double age, ReactionLatency latency,
                          std::array<double, kGestureCount> recognition, DefensePolicy policy, double gap) {
    AgentProfile p;
    p.name = std::move(name);
    p.age = age;
    p.reaction_latency = latency;
    p.recognition_prob = recognition;
    p.defense_policy = policy;
    p.inter_gesture_gap = gap;
    return p;
}

// Recognition order: Kick, Punch, ZoomKick, ZoomSquat, Zoom.
constexpr std::array<double, kGestureCount> kYoungRecognition{0.82, 0.55, 0.97, 0.90, 1.0};
constexpr std::array<double, kGestureCount> kMiddleRecognition{0.78, 0.55, 0.97, 0.85, 1.0};
constexpr ReactionLatency kYoungLatency{0.25, 0.05};
constexpr ReactionLatency kMiddleLatency{0.45, 0.10};
constexpr double kYoungGap = 1.0;
constexpr double kMiddleGap = 1.4;
constexpr DefensePolicy kDiscerning{DefenseKind::Discerning, 1.0};

Direction direction_toward(std::int64_t position_mm) {
    return position_mm < 0 ? Direction::Left : Direction::Right;
}

std::string_view to_string(DefenseKind k) {
    switch (k) {
        case DefenseKind::Gullible: return "gullible";
        case DefenseKind::Discerning: return "discerning";
        case DefenseKind::NoDefense: return "no_defense";
    }
    return "gullible";
}

DefenseKind parse_defense_kind(std::string_view s) {
    if (s == "gullible") return DefenseKind::Gullible;
    if (s == "discerning") return DefenseKind::Discerning;
    if (s == "no_defense") return DefenseKind::NoDefense;
    throw Error("invalid-profile", "unknown defense policy '" + std::string(s) + "'");
}

} // namespace

const std::vector<std::string>& builtin_profile_names() {
    static const std::vector<std::string> names{"young_gullible", "middle_gullible", "young_discerning",
                                                "middle_discerning", "relentless"};
    return names;
}

AgentProfile builtin_profile(std::string_view name) {
    if (name == "young_gullible") {
        return make_profile("young_gullible", 21, kYoungLatency, kYoungRecognition, {}, kYoungGap);
    }
    if (name == "middle_gullible") {
        return make_profile("middle_gullible", 48, kMiddleLatency, kMiddleRecognition, {}, kMiddleGap);
    }
    if (name == "young_discerning") {
        return make_profile("young_discerning", 21, kYoungLatency, kYoungRecognition, kDiscerning, kYoungGap);
    }
    if (name == "middle_discerning") {
        return make_profile("middle_discerning", 48, kMiddleLatency, kMiddleRecognition, kDiscerning, kMiddleGap);
    }
    if (name == "relentless") {
        return make_profile("relentless", 30, {0.0, 0.0}, {1.0, 1.0, 1.0, 1.0, 1.0}, {DefenseKind::Gullible, 0.0}, 0.0);
    }
    throw Error("unknown-profile", "no built-in profile named '" + std::string(name) + "'");
}

void validate(const AgentProfile& p, const GameConfig& config) {
    auto bad = [&p](const std::string& why) { throw Error("invalid-profile", p.name + ": " + why); };
    for (Gesture g : kAllGestures) {
        const double q = p.recognition(g);
        if (!(q >= 0.0 && q <= 1.0)) bad("recognition_prob." + std::string(to_string(g)) + " must be in [0,1]");
    }
    if (!(p.reaction_latency.mean >= 0.0)) bad("reaction_latency.mean must be >= 0");
    if (!(p.reaction_latency.jitter >= 0.0)) bad("reaction_latency.jitter must be >= 0");
    if (!(p.inter_gesture_gap >= 0.0)) bad("inter_gesture_gap must be >= 0");
    if (!(p.age > 0.0)) bad("age must be positive");
    if (p.defense_policy.kind == DefenseKind::Discerning && p.defense_policy.reveal_wait < config.false_attack_duration) {
        bad("reveal_wait must be >= false_attack_duration");
    }
    for (Gesture g : p.attack_priority) {
        if (!is_attack_gesture(g)) bad("attack_priority may only list attack gestures");
    }
}

Json to_json(const AgentProfile& p) {
    Json j;
    j["name"] = p.name;
    j["reaction_latency"] = Json{{"mean", p.reaction_latency.mean}, {"jitter", p.reaction_latency.jitter}};
    Json rec;
    for (Gesture g : kAllGestures) rec[std::string(to_string(g))] = p.recognition(g);
    j["recognition_prob"] = std::move(rec);
    j["defense_policy"] = Json{{"kind", to_string(p.defense_policy.kind)}, {"reveal_wait", p.defense_policy.reveal_wait}};
    Json prio = Json::array();
    for (Gesture g : p.attack_priority) prio.push_back(to_string(g));
    j["attack_priority"] = std::move(prio);
    j["inter_gesture_gap"] = p.inter_gesture_gap;
    j["age"] = p.age;
    return j;
}

AgentProfile profile_from_json(const Json& j, const AgentProfile& base) {
    if (!j.is_object()) throw Error("invalid-profile", "profile must be an object");
    AgentProfile p = base;
    if (auto it = j.find("base"); it != j.end()) p = builtin_profile(it->get<std::string>());
    auto number = [](const Json& v, const std::string& field) {
        if (!v.is_number()) throw Error("invalid-profile", field + " must be a number");
        return v.get<double>();
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "base") continue;
            if (key == "name") {
                p.name = v.get<std::string>();
            } else if (key == "reaction_latency") {
                for (const auto& [k2, v2] : v.items()) {
                    if (k2 == "mean") p.reaction_latency.mean = number(v2, "reaction_latency.mean");
                    else if (k2 == "jitter") p.reaction_latency.jitter = number(v2, "reaction_latency.jitter");
                    else throw Error("invalid-profile", "reaction_latency." + k2 + " is not a known field");
                }
            } else if (key == "recognition_prob") {
                for (const auto& [k2, v2] : v.items()) {
                    p.recognition_prob[index(parse_gesture(k2))] = number(v2, "recognition_prob." + k2);
                }
            } else if (key == "defense_policy") {
                for (const auto& [k2, v2] : v.items()) {
                    if (k2 == "kind") p.defense_policy.kind = parse_defense_kind(v2.get<std::string>());
                    else if (k2 == "reveal_wait") p.defense_policy.reveal_wait = number(v2, "defense_policy.reveal_wait");
                    else throw Error("invalid-profile", "defense_policy." + k2 + " is not a known field");
                }
            } else if (key == "attack_priority") {
                p.attack_priority.clear();
                for (const auto& g : v) p.attack_priority.push_back(parse_gesture(g.get<std::string>()));
            } else if (key == "inter_gesture_gap") {
                p.inter_gesture_gap = number(v, key);
            } else if (key == "age") {
                p.age = number(v, key);
            } else {
                throw Error("invalid-profile", key + " is not a known field");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("invalid-profile", e.what());
    } catch (const Error& e) {
        if (e.code() == "invalid-profile" || e.code() == "unknown-profile") throw;
        throw Error("invalid-profile", e.detail());
    }
    return p;
}

Observation observe(const GameState& s) {
    Observation o;
    o.time_ms = s.time_ms;
    o.tick_ms = s.config.tick_ms();
    o.phase = s.phase;
    for (MoveId m : {MoveId::Kick, MoveId::Punch, MoveId::ZoomKick, MoveId::ZoomSquat}) {
        o.cooldown_ms[index(m)] = s.player.cooldown(m);
    }
    o.hp = s.player.hp;
    o.lives = s.player.lives_remaining;
    o.shield_active = s.shield.active;
    o.shield_remaining_ms = s.shield.remaining_ms;
    o.monster.position_mm = s.monster.position_mm;
    o.monster.hp = s.monster.hp;
    o.monster.lives = s.monster.lives_remaining;
    if (const auto& pa = s.monster.pending_attack) {
        o.monster.attack_in_progress = true;
        o.monster.attack_elapsed_ms = pa->elapsed_ms;
        if (pa->elapsed_ms >= s.config.to_ms(s.config.false_attack_duration)) o.monster.attack_is_false = pa->is_false;
    }
    return o;
}

std::optional<GestureIntent> decide(const AgentProfile& profile, const Observation& obs, AgentMemory& memory,
                                    Rng& rng) {
    const std::int64_t next_ms = obs.time_ms + obs.tick_ms;
    const bool training = std::holds_alternative<TrainingPhase>(obs.phase);
    // Training scripts a defense on every onset regardless of temperament.
    const DefensePolicy policy = training ? DefensePolicy{} : profile.defense_policy;
    const bool attack_live = obs.monster.attack_in_progress;
    const std::int64_t launch_ms = obs.time_ms - obs.monster.attack_elapsed_ms;

    if (attack_live && launch_ms != memory.last_onset_ms) {
        memory.last_onset_ms = launch_ms;
        if (policy.kind != DefenseKind::NoDefense) {
            const auto& lat = profile.reaction_latency;
            const double latency = std::max(0.0, rng.uniform_range(lat.mean - lat.jitter, lat.mean + lat.jitter));
            CommittedDefense c{launch_ms, obs.time_ms + seconds_to_ms_ceil(latency), false};
            if (policy.kind == DefenseKind::Discerning) {
                c.issue_time_ms = std::max(c.issue_time_ms, launch_ms + seconds_to_ms_ceil(policy.reveal_wait));
                c.cancel_if_attack_ends = true;
            }
            memory.committed = c;
        }
    }

    const std::int64_t gap_ms = seconds_to_ms_ceil(profile.inter_gesture_gap);
    const bool gap_ok = next_ms - memory.last_gesture_ms >= gap_ms;
    auto emit = [&](Gesture g, Direction d) {
        memory.last_gesture_ms = next_ms;
        return GestureIntent{g, d, next_ms, rng.bernoulli(profile.recognition(g))};
    };

    if (memory.committed) {
        const CommittedDefense c = *memory.committed;
        if (next_ms < c.issue_time_ms) return std::nullopt;  // preparing the defense
        const bool same_attack_live = attack_live && launch_ms == c.onset_ms;
        const bool cooldown_ok = obs.cooldown(MoveId::ZoomSquat) <= obs.tick_ms && !obs.shield_active;
        if ((c.cancel_if_attack_ends && !same_attack_live) || !cooldown_ok) {
            memory.committed.reset();
        } else {
            if (!gap_ok) return std::nullopt;
            memory.committed.reset();
            return emit(Gesture::ZoomSquat, Direction::Neutral);
        }
    }

    if (!gap_ok) return std::nullopt;

    if (std::holds_alternative<GameplayPhase>(obs.phase)) {
        for (Gesture g : profile.attack_priority) {
            if (obs.cooldown(*move_for(g)) <= obs.tick_ms) return emit(g, direction_toward(obs.monster.position_mm));
        }
    } else if (const auto* t = std::get_if<TrainingPhase>(&obs.phase)) {
        if (t->awaiting_zoom) return emit(Gesture::Zoom, Direction::Neutral);
        const MoveId m = trained_move(t->stage);
        if (t->stage != TrainingStage::ZoomSquat && obs.cooldown(m) <= obs.tick_ms) {
            const Gesture g = m == MoveId::Kick ? Gesture::Kick : m == MoveId::Punch ? Gesture::Punch : Gesture::ZoomKick;
            return emit(g, direction_toward(obs.monster.position_mm));
        }
    } else if (const auto* r = std::get_if<RevivePhase>(&obs.phase)) {
        return emit(r->awaiting_zoom ? Gesture::Zoom : Gesture::ZoomSquat, Direction::Neutral);
    }
    return std::nullopt;
}

} // namespace gf
